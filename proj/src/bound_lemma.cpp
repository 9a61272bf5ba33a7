#include "symstable/bound_lemma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symstable/error.hpp"
#include "symstable/lambert_w.hpp"
#include "symstable/parallel.hpp"

namespace symstable {

namespace {

constexpr double kBracketStart = 1e-12;
constexpr double kBracketCap = 50.0;

void check_k_args(double alpha, double epsilon, double r, double L) {
  require(alpha > 0.0, "alpha must be positive");
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  require(r > 0.0 && std::isfinite(r), "r must be positive");
  require(L > 0.0, "L must be positive");
}

// Root of k(r) = target for a strictly decreasing k with k(0+) > target.
template <class K>
double solve_decreasing(const K& k, double target, double r_tol) {
  double lo = kBracketStart;
  if (k(lo) <= target) return lo;
  double hi = 1.0;
  while (k(hi) > target) {
    if (hi >= kBracketCap) return kBracketCap;
    lo = hi;
    hi = std::min(2.0 * hi, kBracketCap);
  }
  while (hi - lo > r_tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (k(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace

double solve_x_prime(double alpha, double epsilon, double r, double L, double x_tol) {
  check_k_args(alpha, epsilon, r, L);
  const double e_bar = epsilon * std::exp(-r);
  const double c = 4.0 * L * r;
  if (!(x_tol > 0.0)) x_tol = 1e-12 * e_bar;
  auto f = [&](double x) { return x * (2.0 * alpha * std::pow(x / c, 1.0 / alpha) + (1.0 + alpha)); };

  // f(0) = 0 < E < f(E); the root also sits below E / (1 + alpha).
  double lo = 0.0;
  double hi = e_bar / (1.0 + alpha);
  while (hi - lo > x_tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < e_bar) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

double k_value(double alpha, double epsilon, double r, double L) {
  const double x = solve_x_prime(alpha, epsilon, r, L);
  const double e_bar = epsilon * std::exp(-r);
  // At the root E - (1 + alpha) x' = 2 alpha x' (x'/c)^(1/alpha); use the
  // side that does not cancel.
  double gap = e_bar - (1.0 + alpha) * x;
  if ((1.0 + alpha) * x > 0.5 * e_bar) gap = 2.0 * alpha * x * std::pow(x / (4.0 * L * r), 1.0 / alpha);
  return gap * gap / 8.0;
}

double k_zero_alpha(double epsilon, double r, double L) {
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  require(r > 0.0, "r must be positive");
  require(L > 0.0, "L must be positive");
  if (r > lambert_w0(epsilon / (4.0 * L))) return 0.0;
  const double gap = 4.0 * L * r - epsilon * std::exp(-r);
  return gap * gap / 8.0;
}

std::uint64_t n_min_lemma(double epsilon, double p) {
  require(epsilon > 0.0, "epsilon must be positive");
  require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  const double ratio = (1.0 + epsilon) / epsilon;
  const double bound = 8.0 * std::log(2.0 / p) * ratio * ratio;
  if (bound >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::floor(bound)) + 1;
}

double solve_r_n(double alpha, const BoundConfig& config) {
  config.validate();
  require(alpha > 0.0 && alpha <= 2.0, "alpha must lie in (0, 2]");
  const double eps = config.epsilon / (1.0 + config.epsilon);
  const double target = std::log(2.0 / config.p) / static_cast<double>(config.n);
  if (target >= eps * eps / 8.0) return 0.0;
  return solve_decreasing([&](double r) { return k_value(alpha, eps, r, config.L); }, target, config.r_tol);
}

double solve_r_n_limit(const BoundConfig& config) {
  config.validate();
  const double eps = config.epsilon / (1.0 + config.epsilon);
  const double target = std::log(2.0 / config.p) / static_cast<double>(config.n);
  if (target >= eps * eps / 8.0) return 0.0;
  return solve_decreasing([&](double r) { return k_zero_alpha(eps, r, config.L); }, target, config.r_tol);
}

BoundCurve r_bar_lemma(const BoundConfig& config) {
  config.validate();
  BoundCurve curve;
  curve.construction = Construction::lemma;
  curve.alphas = alpha_grid(config.alpha_min, config.alpha_grid_points);
  curve.r_values.assign(curve.alphas.size(), 0.0);
  curve.sample_too_small = config.n < n_min_lemma(config.epsilon, config.p);

  if (!curve.sample_too_small) {
    parallel_for(curve.alphas.size(), [&](std::size_t i) { curve.r_values[i] = solve_r_n(curve.alphas[i], config); });
    if (config.alpha_min == 0.0) curve.limit_entry = solve_r_n_limit(config);
  } else if (config.alpha_min == 0.0) {
    curve.limit_entry = 0.0;
  }

  double inf = *std::min_element(curve.r_values.begin(), curve.r_values.end());
  if (curve.limit_entry) inf = std::min(inf, *curve.limit_entry);
  curve.r_bar = inf;
  for (std::size_t i = 1; i < curve.alphas.size(); ++i) {
    curve.grid_spacing = std::max(curve.grid_spacing, curve.alphas[i] - curve.alphas[i - 1]);
  }
  return curve;
}

}  // namespace symstable
