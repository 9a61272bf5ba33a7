#pragma once

#include <cstdint>

#include "symstable/bounds.hpp"

namespace symstable {

// Construction through the inner maximizer x'. Notation shared by the
// functions below: E = epsilon e^-r, c = 4 L r, and
//   h(x) = (E - x) / (1 + (c / x)^(1/alpha) / 2),  0 < x <= E,
//   f(x) = x (2 alpha (x / c)^(1/alpha) + 1 + alpha).
// x' maximizes h and is the unique root of f(x) = E.

/// Root of f(x) = E by bisection on (0, E]. x_tol is absolute; a
/// non-positive value selects 1e-12 E.
double solve_x_prime(double alpha, double epsilon, double r, double L, double x_tol = 0.0);

/// k(alpha, epsilon, r) = (E - (1 + alpha) x')^2 / 8. Strictly decreasing
/// in r, tending to epsilon^2 / 8 as r -> 0.
double k_value(double alpha, double epsilon, double r, double L);

/// The alpha -> 0 limit of k: (c - E)^2 / 8 while r <= W(epsilon / 4L),
/// zero beyond.
double k_zero_alpha(double epsilon, double r, double L);

/// Least n with n > 8 ln(2/p) ((1 + epsilon) / epsilon)^2.
std::uint64_t n_min_lemma(double epsilon, double p);

/// r_n(alpha): the root of k(alpha, epsilon / (1 + epsilon), r) = ln(2/p) / n.
/// Returns 0 when n is too small for a positive root.
double solve_r_n(double alpha, const BoundConfig& config);

/// Same equation with the alpha -> 0 limit k_zero_alpha.
double solve_r_n_limit(const BoundConfig& config);

/// r_n over the alpha grid and its infimum.
BoundCurve r_bar_lemma(const BoundConfig& config);

}  // namespace symstable
