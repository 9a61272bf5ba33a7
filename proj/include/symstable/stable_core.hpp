#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace symstable {

/// Symmetric (beta = 0) stable law with characteristic function
/// exp(-(gamma |u|)^alpha + i delta u).
class StableParams {
 public:
  /// Throws Errc::domain unless 0 < alpha <= 2 and gamma > 0 (all finite).
  StableParams(double alpha, double gamma = 1.0, double delta = 0.0);

  double alpha() const noexcept { return alpha_; }
  double gamma() const noexcept { return gamma_; }
  double delta() const noexcept { return delta_; }

  friend bool operator==(const StableParams&, const StableParams&) = default;

 private:
  double alpha_;
  double gamma_;
  double delta_;
};

/// An i.i.d. draw. Values are finite; the seed and generating law are only
/// known when the sample came from sample_symmetric_stable.
class Sample {
 public:
  explicit Sample(std::vector<double> values, std::optional<std::uint64_t> seed = std::nullopt,
                  std::optional<StableParams> origin = std::nullopt);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::optional<std::uint64_t>& seed() const noexcept { return seed_; }
  const std::optional<StableParams>& origin() const noexcept { return origin_; }

  /// Median absolute deviation about the median.
  double mad() const;

  /// True when every value is identical.
  bool degenerate() const noexcept;

 private:
  std::vector<double> values_;
  std::optional<std::uint64_t> seed_;
  std::optional<StableParams> origin_;
};

/// r(u) = (gamma u)^alpha for u >= 0.
double exact_r(const StableParams& params, double u);

/// The exact characteristic function at u.
std::complex<double> exact_cf(const StableParams& params, double u);

/// One standard symmetric stable variate (gamma = 1, delta = 0) from a
/// uniform angle in (-pi/2, pi/2) and a unit exponential
/// (Chambers-Mallows-Stuck). Saturates at +-DBL_MAX instead of overflowing.
double cms_standard_variate(double alpha, double angle, double exponential);

Sample sample_symmetric_stable(const StableParams& params, std::size_t n, std::uint64_t seed);

/// Monte Carlo estimate of F(t) (|t|/gamma)^alpha on a grid of negative t,
/// using the empirical CDF of mc_n draws. Requires alpha < 2.
std::vector<double> tail_ratio_curve(const StableParams& params, std::span<const double> t_grid,
                                     std::size_t mc_n, std::uint64_t seed);

/// One value per line; a `# stable ...` header line when the sample records
/// its generating law and seed.
void write_sample(std::ostream& os, const Sample& sample);

/// Reads one decimal per line, skipping blank lines and `#` comments.
/// Throws Errc::invalid_arguments on unparsable or non-finite values.
Sample read_sample(std::istream& is);

}  // namespace symstable
