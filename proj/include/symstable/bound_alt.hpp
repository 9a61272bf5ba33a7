#pragma once

#include <cstdint>
#include <optional>

#include "symstable/bounds.hpp"

namespace symstable {

// Closed-form construction from the two-event split with 4 exp(-n k).
// With eps = epsilon / (1 + epsilon):
//   r1(alpha) = -ln[(ln(4/p) / n) eps^-2 32 (1 + alpha)^2] / 2
//   g(alpha)  = alpha^alpha / (2^(alpha/2) (alpha+1)^(alpha+1) 8 L)
//               * (n / ln(4/p))^(alpha/2) * eps^(alpha+1)
//   r2(alpha) = W((alpha + 1) g(alpha)) / (alpha + 1)
// and r_n(alpha) = min(r1, r2), zero when r1 is not positive.

struct AltBoundParts {
  double r1 = 0.0;  // clipped at 0
  double r2 = 0.0;
  double g = 0.0;
  bool r1_positive = false;
};

/// r1 clipped at zero; `positive` (if given) reports whether the raw value
/// was positive.
double r1_alt(double alpha, const BoundConfig& config, bool* positive = nullptr);
double g_n_alt(double alpha, const BoundConfig& config);
double r2_alt(double alpha, const BoundConfig& config);
AltBoundParts alt_parts(double alpha, const BoundConfig& config);

/// Least integer exceeding ln(4/p) ((1 + epsilon) / epsilon)^2 288.
std::uint64_t n_o_alt(double epsilon, double p);

/// kappa = eps sqrt(n / (2 ln(4/p))).
double kappa_alt(const BoundConfig& config);

/// Root in [1e-6, 2] of r2(alpha) - ln(kappa) alpha / (1 + alpha), when the
/// endpoints bracket one.
std::optional<double> alpha2_alt(const BoundConfig& config);

/// Grid minimum of min(r1, r2), plus the closed-form
/// ln kappa - ln(max(12, (1 + alpha2) / alpha2)) as a cross-check when
/// kappa > 12 and n > n_o_alt.
BoundCurve r_bar_alt(const BoundConfig& config);

}  // namespace symstable
