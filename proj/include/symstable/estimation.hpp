#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symstable/bounds.hpp"
#include "symstable/ecf.hpp"
#include "symstable/stable_core.hpp"

namespace symstable {

/// n log-spaced points on [lo, hi], both ends included.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

struct EstimationConfig {
  double p = 0.1;
  /// Known lower bound on the stability index; must be positive.
  double alpha_min = 0.5;
  /// Target precision (Q1 input). Q2 computes it.
  std::optional<double> epsilon1;
  /// Sample size (Q2 input). Q1 computes it.
  std::optional<std::uint64_t> n;
  std::vector<double> rho_grid = log_grid(1e-4, 1e2, 200);
  std::vector<double> eps_grid = log_grid(1e-4, 1.0, 200);
  Construction construction = Construction::lemma;
  double L = 0.5;
  /// Alpha-grid resolution of every r-bar evaluated inside F.
  std::size_t alpha_grid_points = 100;

  void validate() const;
  /// r-bar(rho, p, n, alpha_min) under this configuration.
  BoundConfig bound_config(double rho, std::uint64_t n) const;
};

/// Diagnostics carried alongside an estimate.
struct EstimateDiagnostics {
  double rho = 0.0;
  double f_value = 0.0;            // F at the selected (rho, epsilon)
  std::optional<std::uint64_t> n1;  // minimal n of the log-scale bound for (epsilon, r_under)
  double residual_hi = 0.0;
  double residual_lo = 0.0;
  /// r_bar - 2 eps > r_under + 2 eps and (eps1 / 4) ln(ratio) >= eps.
  bool guarantee_chain = false;
  bool ci_clipped = false;
  std::string procedure;  // "levels", "q1" or "q2"
};

struct EstimateResult {
  double alpha_hat = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double r_bar = 0.0;
  double r_under = 0.0;
  double epsilon = 0.0;
  double epsilon1 = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t n = 0;
  Construction construction = Construction::lemma;
  EstimateDiagnostics diagnostics;
};

/// JSON object with the fixed top-level field names and a `diagnostics` block.
std::string to_json(const EstimateResult& result);

/// Log-log slope of r-hat between two fixed arguments 0 < u2 < u1.
/// Errc::invalid_arguments when either r-hat value is 0 or infinite.
double alpha_hat_two_point(const CurveFn& curve, double u1, double u2);
double alpha_hat_two_point(const Sample& sample, double u1, double u2);

/// Level-crossing estimate: u1, u2 where r-hat first reaches r_bar - eps and
/// last sits at r_under + eps below it; the slope uses the levels themselves.
EstimateResult alpha_hat_levels(const CurveFn& curve, const ScanConfig& scan, double r_bar, double r_under,
                                double epsilon);
EstimateResult alpha_hat_levels(const Sample& sample, double r_bar, double r_under, double epsilon);

/// Smallest eps1 with (eps1 / 4) ln((r_bar - 2 eps) / (r_under + 2 eps)) >= eps.
/// Errc::precision_gap_too_narrow unless r_bar - 2 eps > r_under + 2 eps.
double epsilon1_min(double r_bar, double r_under, double epsilon);

/// Least n with r_bar(eps r_under / (1 + eps), p, n, alpha_min) > r_under and
/// n at or above that preciseness' minimal sample size.
std::uint64_t compute_n1(double epsilon, double p, double alpha_min, double r_under,
                         Construction construction = Construction::lemma, double L = 0.5,
                         std::size_t alpha_grid_points = 100);

/// (r_bar - 2 eps) / (rho (1 + eps) / eps + 2 eps) - exp(4 eps / eps1).
double f_value(double r_bar, double rho, double eps, double epsilon1);

/// Best grid point of a sup over (rho, eps).
struct FArgmax {
  double value = -std::numeric_limits<double>::infinity();
  double rho = 0.0;
  double eps = 0.0;
  double r_bar = 0.0;
};

// Q1 family: n varies, ctx.epsilon1 fixed.
double F_q1(std::uint64_t n, double rho, double eps, const EstimationConfig& ctx);
double F_q1_sup_eps(std::uint64_t n, double rho, const EstimationConfig& ctx);
/// sup over rho of min(F(n, rho), n - n_o(rho, p)).
double F_q1_outer(std::uint64_t n, const EstimationConfig& ctx);

// Q2 family: ctx.n fixed, eps1 varies.
double F_q2(double epsilon1, double rho, double eps, const EstimationConfig& ctx);
double F_q2_sup_eps(double epsilon1, double rho, const EstimationConfig& ctx);
/// sup over grid rho with n > n_o(rho, p).
double F_q2_outer(double epsilon1, const EstimationConfig& ctx);

/// Steps up to fixing the constants; no data involved.
struct EstimationPlan {
  std::uint64_t n = 0;
  double rho = 0.0;
  double epsilon = 0.0;
  double r_bar = 0.0;
  double r_under = 0.0;
  double epsilon1 = 0.0;
  double f_value = 0.0;
  Construction construction = Construction::lemma;
  std::string procedure;
};

/// Minimal n with F_q1_outer(n) > 0, then the F-maximizing (rho, eps).
EstimationPlan plan_q1(const EstimationConfig& ctx);
/// Smallest eps1 (bisection, up to 2) with F_q2_outer(eps1) > 0, then the
/// F-maximizing (rho, eps). Errc::sample_too_small_for_any_ci otherwise.
EstimationPlan plan_q2(const EstimationConfig& ctx);

/// Where the size-n sample comes from.
class DataSource {
 public:
  struct Draw {
    CurveFn curve;
    ScanConfig scan;
    std::shared_ptr<const Sample> sample;  // null for synthetic exact curves
  };

  virtual ~DataSource() = default;
  /// Errc::data_source_too_small when n points cannot be supplied.
  virtual Draw draw(std::uint64_t n) = 0;
};

/// Fresh symmetric stable draws; the k-th draw uses derive_seed(seed, k).
class SyntheticSource : public DataSource {
 public:
  SyntheticSource(StableParams params, std::uint64_t seed, std::uint64_t max_n = 50'000'000)
      : params_(params), seed_(seed), max_n_(max_n) {}
  Draw draw(std::uint64_t n) override;

 private:
  StableParams params_;
  std::uint64_t seed_;
  std::uint64_t max_n_;
  std::uint64_t draws_ = 0;
};

/// A fixed data set; draw(n) uses its first n values.
class SampleSource : public DataSource {
 public:
  explicit SampleSource(Sample sample) : sample_(std::make_shared<const Sample>(std::move(sample))) {}
  Draw draw(std::uint64_t n) override;

 private:
  std::shared_ptr<const Sample> sample_;
};

/// r-hat replaced by the exact r(u), for any n.
class ExactCurveSource : public DataSource {
 public:
  explicit ExactCurveSource(StableParams params) : params_(params) {}
  Draw draw(std::uint64_t n) override;

 private:
  StableParams params_;
};

/// Steps that touch data: level search on a size-plan.n draw, the estimate,
/// and the interval [alpha_hat - eps1, alpha_hat + eps1] clipped to (0, 2].
EstimateResult execute_plan(const EstimationPlan& plan, const EstimationConfig& ctx, DataSource& source,
                            bool with_n1 = true);

EstimateResult procedure1(const EstimationConfig& ctx, DataSource& source);
EstimateResult procedure2(const EstimationConfig& ctx, DataSource& source);

}  // namespace symstable
