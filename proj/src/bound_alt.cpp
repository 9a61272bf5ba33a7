#include "symstable/bound_alt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symstable/error.hpp"
#include "symstable/lambert_w.hpp"

namespace symstable {

namespace {

constexpr double kAlpha2Lo = 1e-6;

// alpha = 0 is allowed internally for the limit entry.
double r1_raw(double alpha, const BoundConfig& config) {
  const double ratio = (1.0 + config.epsilon) / config.epsilon;
  const double inner = std::log(4.0 / config.p) / static_cast<double>(config.n) * ratio * ratio * 32.0 *
                       (1.0 + alpha) * (1.0 + alpha);
  return -0.5 * std::log(inner);
}

double g_raw(double alpha, const BoundConfig& config) {
  const double eps = config.epsilon / (1.0 + config.epsilon);
  const double log_n_term = std::log(static_cast<double>(config.n) / std::log(4.0 / config.p));
  // Logs keep (n / ln(4/p))^(alpha/2) from overflowing for huge n.
  const double log_g = (alpha > 0.0 ? alpha * std::log(alpha) : 0.0) - 0.5 * alpha * std::log(2.0) -
                       (alpha + 1.0) * std::log(alpha + 1.0) - std::log(8.0 * config.L) + 0.5 * alpha * log_n_term +
                       (alpha + 1.0) * std::log(eps);
  return std::exp(log_g);
}

double r2_raw(double alpha, const BoundConfig& config) {
  return lambert_w0((alpha + 1.0) * g_raw(alpha, config)) / (alpha + 1.0);
}

double r_n_alt(double alpha, const BoundConfig& config) {
  const double r1 = r1_raw(alpha, config);
  if (!(r1 > 0.0)) return 0.0;
  return std::min(r1, r2_raw(alpha, config));
}

void check_alpha(double alpha) { require(alpha > 0.0 && alpha <= 2.0, "alpha must lie in (0, 2]"); }

}  // namespace

double r1_alt(double alpha, const BoundConfig& config, bool* positive) {
  config.validate();
  check_alpha(alpha);
  const double r1 = r1_raw(alpha, config);
  if (positive) *positive = r1 > 0.0;
  return r1 > 0.0 ? r1 : 0.0;
}

double g_n_alt(double alpha, const BoundConfig& config) {
  config.validate();
  check_alpha(alpha);
  return g_raw(alpha, config);
}

double r2_alt(double alpha, const BoundConfig& config) {
  config.validate();
  check_alpha(alpha);
  return r2_raw(alpha, config);
}

AltBoundParts alt_parts(double alpha, const BoundConfig& config) {
  AltBoundParts parts;
  parts.r1 = r1_alt(alpha, config, &parts.r1_positive);
  parts.g = g_raw(alpha, config);
  parts.r2 = r2_raw(alpha, config);
  return parts;
}

std::uint64_t n_o_alt(double epsilon, double p) {
  require(epsilon > 0.0, "epsilon must be positive");
  require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  const double ratio = (1.0 + epsilon) / epsilon;
  const double bound = std::log(4.0 / p) * ratio * ratio * 288.0;
  if (bound >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::floor(bound)) + 1;
}

double kappa_alt(const BoundConfig& config) {
  config.validate();
  return config.epsilon / (config.epsilon + 1.0) *
         std::sqrt(static_cast<double>(config.n) / (2.0 * std::log(4.0 / config.p)));
}

std::optional<double> alpha2_alt(const BoundConfig& config) {
  const double log_kappa = std::log(kappa_alt(config));
  auto h = [&](double a) { return r2_raw(a, config) - log_kappa * a / (1.0 + a); };
  double lo = kAlpha2Lo;
  double hi = 2.0;
  double h_lo = h(lo);
  const double h_hi = h(hi);
  if (h_lo == 0.0) return lo;
  if (h_hi == 0.0) return hi;
  if ((h_lo > 0.0) == (h_hi > 0.0)) return std::nullopt;
  for (int i = 0; i < 200; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double h_mid = h(mid);
    if ((h_mid > 0.0) == (h_lo > 0.0)) {
      lo = mid;
      h_lo = h_mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

BoundCurve r_bar_alt(const BoundConfig& config) {
  config.validate();
  BoundCurve curve;
  curve.construction = Construction::alternative;
  curve.alphas = alpha_grid(config.alpha_min, config.alpha_grid_points);
  curve.sample_too_small = config.n < n_o_alt(config.epsilon, config.p);
  curve.r_values.reserve(curve.alphas.size());
  for (double a : curve.alphas) curve.r_values.push_back(r_n_alt(a, config));
  if (config.alpha_min == 0.0) curve.limit_entry = r_n_alt(0.0, config);

  if (curve.sample_too_small) {
    curve.r_bar = 0.0;
  } else {
    double inf = *std::min_element(curve.r_values.begin(), curve.r_values.end());
    if (curve.limit_entry) inf = std::min(inf, *curve.limit_entry);
    curve.r_bar = inf;
  }
  for (std::size_t i = 1; i < curve.alphas.size(); ++i) {
    curve.grid_spacing = std::max(curve.grid_spacing, curve.alphas[i] - curve.alphas[i - 1]);
  }

  curve.kappa = kappa_alt(config);
  if (!curve.sample_too_small && *curve.kappa > 12.0) {
    curve.alpha2 = alpha2_alt(config);
    if (curve.alpha2) {
      curve.closed_form_r_bar = std::log(*curve.kappa) - std::log(std::max(12.0, (1.0 + *curve.alpha2) / *curve.alpha2));
      curve.cross_check_applicable = true;
    }
  }
  return curve;
}

}  // namespace symstable
