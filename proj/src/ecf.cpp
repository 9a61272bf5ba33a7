#include "symstable/ecf.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "symstable/error.hpp"

namespace symstable {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// |phi_n| at or below this counts as a zero of the empirical CF.
constexpr double kZeroModulus = 16.0 * std::numeric_limits<double>::epsilon();
constexpr int kMaxBisections = 200;

struct Bisected {
  double u;
  double residual;
};

// Requires curve(lo) <= level < curve(hi) (hi may be +inf). Bisects to
// adjacent doubles and returns whichever end sits closer to the level.
Bisected bisect_crossing(const CurveFn& curve, double lo, double hi, double level, double f_lo, double f_hi,
                         std::size_t& evaluations) {
  for (int i = 0; i < kMaxBisections; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = curve(mid);
    ++evaluations;
    if (f_mid > level) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  const double res_lo = std::abs(f_lo - level);
  const double res_hi = std::abs(f_hi - level);
  return res_lo <= res_hi ? Bisected{lo, res_lo} : Bisected{hi, res_hi};
}

}  // namespace

std::complex<double> ecf_eval(const Sample& sample, double u) {
  double c = 0.0;
  double s = 0.0;
  for (double x : sample.values()) {
    const double t = u * x;
    c += std::cos(t);
    s += std::sin(t);
  }
  const double n = static_cast<double>(sample.size());
  return {c / n, s / n};
}

double r_hat(const Sample& sample, double u) {
  if (u == 0.0) return 0.0;
  const std::complex<double> phi = ecf_eval(sample, u);
  const double modulus_sq = std::norm(phi);
  if (modulus_sq <= kZeroModulus * kZeroModulus) return kInf;
  // Rounding can push an atom's |phi_n|^2 a hair above 1.
  return modulus_sq >= 1.0 ? 0.0 : -0.5 * std::log(modulus_sq);
}

ScanConfig ScanConfig::for_scale(double scale) {
  require(scale > 0.0 && std::isfinite(scale), "scan scale must be positive");
  ScanConfig cfg;
  cfg.u_start = 1e-3 / scale;
  cfg.du = cfg.u_start;
  cfg.u_max = 1e3 * cfg.u_start;
  return cfg;
}

ScanConfig ScanConfig::for_sample(const Sample& sample) {
  double scale = sample.mad();
  if (!(scale > 0.0)) {
    double mean = 0.0;
    for (double v : sample.values()) mean += v;
    mean /= static_cast<double>(sample.size());
    double abs_dev = 0.0;
    for (double v : sample.values()) abs_dev += std::abs(v - mean);
    scale = abs_dev / static_cast<double>(sample.size());
  }
  if (!(scale > 0.0)) fail(Errc::degenerate_sample, "all sample values are equal");
  return for_scale(scale);
}

LevelCrossing find_u_levels(const CurveFn& curve, double level_hi, double level_lo, const ScanConfig& scan) {
  require(level_lo > 0.0 && level_lo < level_hi, "levels must satisfy 0 < level_lo < level_hi");
  require(scan.u_start > 0.0 && scan.du > 0.0 && scan.u_max >= scan.u_start, "invalid scan grid");

  LevelCrossing out;
  out.level_hi = level_hi;
  out.level_lo = level_lo;

  // Forward: first grid point at or above level_hi. Grid points are computed
  // as u_start + k du rather than accumulated.
  double prev_u = 0.0;
  double prev_r = 0.0;
  double hit_u = 0.0;
  double hit_r = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double u = scan.u_start + static_cast<double>(k) * scan.du;
    if (u > scan.u_max * (1.0 + 1e-12)) {
      fail(Errc::level_not_reached, "r-hat stays below " + std::to_string(level_hi) + " up to u_max");
    }
    const double r = curve(u);
    ++out.evaluations;
    if (std::isinf(r)) {
      fail(Errc::level_not_reached, "empirical characteristic function vanishes before level_hi is reached");
    }
    if (r >= level_hi) {
      hit_u = u;
      hit_r = r;
      break;
    }
    prev_u = u;
    prev_r = r;
  }
  const Bisected hi = bisect_crossing(curve, prev_u, hit_u, level_hi, prev_r, hit_r, out.evaluations);
  out.u1 = hi.u;
  out.residual_hi = hi.residual;

  // Backward from u1: first grid point at or below level_lo.
  double upper_u = out.u1;
  double upper_r = curve(out.u1);
  ++out.evaluations;
  double lower_u = 0.0;
  double lower_r = 0.0;
  for (std::size_t k = 1;; ++k) {
    const double u = out.u1 - static_cast<double>(k) * scan.du;
    if (u <= 0.0) break;  // r-hat(0) = 0 closes the bracket
    const double r = curve(u);
    ++out.evaluations;
    if (r <= level_lo) {
      lower_u = u;
      lower_r = r;
      break;
    }
    upper_u = u;
    upper_r = r;
  }
  const Bisected lo = bisect_crossing(curve, lower_u, upper_u, level_lo, lower_r, upper_r, out.evaluations);
  out.u2 = lo.u;
  out.residual_lo = lo.residual;
  return out;
}

LevelCrossing find_u_levels(const Sample& sample, double level_hi, double level_lo,
                            const std::optional<ScanConfig>& scan) {
  if (sample.degenerate()) fail(Errc::degenerate_sample, "all sample values are equal");
  const ScanConfig cfg = scan ? *scan : ScanConfig::for_sample(sample);
  return find_u_levels([&sample](double u) { return r_hat(sample, u); }, level_hi, level_lo, cfg);
}

}  // namespace symstable
