#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "symstable/bounds.hpp"
#include "symstable/estimation.hpp"
#include "symstable/stable_core.hpp"

namespace symstable {

/// Violation count of a Monte Carlo experiment against a nominal level p.
/// pass = rate <= p + 3 sqrt(p (1 - p) / R); only meaningful in contract.
struct CoverageReport {
  std::string scenario;
  std::size_t replications = 0;
  std::size_t violations = 0;
  double empirical_rate = 0.0;
  double bound_p = 0.0;
  double threshold = 0.0;
  bool pass = false;
  /// The theorem's hypotheses hold for this scenario. When false, `pass`
  /// is still computed but claims nothing.
  bool in_contract = true;
  /// Grid points per replication for sup-type events (0 if unused).
  std::size_t grid_points = 0;
  /// Replications whose log-scale event held without the linear one.
  std::size_t implication_failures = 0;
  /// Replications where the level search failed; counted as violations.
  std::size_t level_failures = 0;
};

std::string to_json(const CoverageReport& report);

/// P(sup over {u : r(u) <= r_bar} of |r - r_hat| > epsilon) on a log grid of
/// grid_points arguments in [1e-4 u_max, u_max], u_max = r_bar^(1/alpha) / gamma.
/// Requires reps >= 30 and config.n at or above the construction's minimal n.
CoverageReport coverage_theorem1(const StableParams& params, const BoundConfig& config, Construction construction,
                                 std::size_t reps, std::uint64_t seed, std::size_t grid_points = 2048);

struct LogBoundScenario {
  double epsilon = 0.3;
  double p = 0.2;
  double alpha_min = 0.5;
  double r_under = 0.1;
  std::uint64_t n = 1000;
  Construction construction = Construction::lemma;
  double L = 0.5;
  std::size_t alpha_grid_points = 100;
  /// Upper end of the r-range. Unset: the bound at preciseness
  /// epsilon r_under / (1 + epsilon). Set: used as is, out of contract.
  std::optional<double> r_bar_override;
};

/// P(sup over {u : r(u) in [r_under, r_bar]} of |ln r - ln r_hat| > epsilon).
/// Also checks, per replication and grid point, that the log-scale event
/// implies |r - r_hat| > epsilon r_under / (1 + epsilon).
CoverageReport coverage_theorem2(const StableParams& params, const LogBoundScenario& scenario, std::size_t reps,
                                 std::uint64_t seed, std::size_t grid_points = 2048);

struct TapsusOptions {
  /// Replace r_hat by the exact r; every replication is then identical.
  bool exact_curve = false;
  /// Constants to use instead of plan_q2(ctx); makes the report out of contract.
  std::optional<EstimationPlan> plan;
};

/// P(|alpha_hat - alpha| >= epsilon1) for the procedure-2 estimate.
CoverageReport coverage_tapsus(const StableParams& params, const EstimationConfig& ctx, std::size_t reps,
                               std::uint64_t seed, const TapsusOptions& options = {});

struct FigureConfig {
  std::size_t n = 10000;          // sample size behind the r_hat curves
  std::size_t u_points = 200;     // linear u grid on (0, u_max]
  double u_max = 5.0;
  std::size_t mc_n = 200000;      // draws behind each tail-ratio curve
  std::size_t t_points = 200;
  std::size_t alpha_grid_points = 400;
  std::size_t n_points = 26;      // log grid of n on [1e3, 1e8]
  double epsilon = 0.1;
  double p = 0.1;
  double L = 0.5;
};

struct FigureTable {
  std::string name;  // fig<k><panel>
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Panels of figure k in {1, ..., 5}.
std::vector<FigureTable> figure_data(int figure, const FigureConfig& config, std::uint64_t seed);

void write_csv(std::ostream& os, const FigureTable& table);

}  // namespace symstable
