#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>

#include "symstable/stable_core.hpp"

namespace symstable {

/// phi_n(u) = (1/n) sum_j exp(i u X_j).
std::complex<double> ecf_eval(const Sample& sample, double u);

/// -ln |phi_n(u)|, or +infinity once |phi_n(u)| vanishes to machine precision.
double r_hat(const Sample& sample, double u);

/// Any u -> r curve the level search can walk: the empirical r-hat of a
/// sample, or an exact r(u) standing in for it in tests.
using CurveFn = std::function<double(double)>;

/// r-hat bound to a shared, immutable sample.
class RHatCurve {
 public:
  explicit RHatCurve(std::shared_ptr<const Sample> sample) : sample_(std::move(sample)) {}

  double operator()(double u) const { return r_hat(*sample_, u); }
  const Sample& sample() const noexcept { return *sample_; }

 private:
  std::shared_ptr<const Sample> sample_;
};

struct ScanConfig {
  double u_start = 1e-3;
  double du = 1e-3;
  double u_max = 1.0;
  /// Residual bound |r(u_i) - level| accepted after bisection.
  double tol = 1e-8;

  /// Scale-aware defaults: u_start = du = 1e-3 / scale, u_max = 1e3 u_start.
  static ScanConfig for_scale(double scale);
  /// for_scale(MAD of the sample), falling back to the mean absolute
  /// deviation when more than half of the values coincide.
  static ScanConfig for_sample(const Sample& sample);
};

struct LevelCrossing {
  double u1 = 0.0;  // first up-crossing of level_hi
  double u2 = 0.0;  // last down-crossing of level_lo below u1
  double level_hi = 0.0;
  double level_lo = 0.0;
  double residual_hi = 0.0;
  double residual_lo = 0.0;
  std::size_t evaluations = 0;
};

/// Forward grid scan for the first bracket of level_hi, then bisection;
/// backward scan from u1 for level_lo, then bisection.
/// Errc::level_not_reached when the scan passes u_max or meets a zero of the
/// characteristic function before level_hi.
LevelCrossing find_u_levels(const CurveFn& curve, double level_hi, double level_lo, const ScanConfig& scan);

/// Same on the r-hat of a sample; Errc::degenerate_sample if all values are
/// equal. Scan defaults come from ScanConfig::for_sample.
LevelCrossing find_u_levels(const Sample& sample, double level_hi, double level_lo,
                            const std::optional<ScanConfig>& scan = std::nullopt);

}  // namespace symstable
