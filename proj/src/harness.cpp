#include "symstable/harness.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

#include "symstable/bound_alt.hpp"
#include "symstable/bound_lemma.hpp"
#include "symstable/ecf.hpp"
#include "symstable/error.hpp"
#include "symstable/parallel.hpp"
#include "symstable/rng.hpp"
#include "symstable/text.hpp"

namespace symstable {

namespace {

constexpr std::size_t kMinReps = 30;

void finish(CoverageReport& rep, const std::vector<char>& hits, double p) {
  rep.replications = hits.size();
  rep.violations = 0;
  for (char h : hits) rep.violations += h != 0;
  rep.empirical_rate = static_cast<double>(rep.violations) / static_cast<double>(rep.replications);
  rep.bound_p = p;
  rep.threshold = p + 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(rep.replications));
  rep.pass = rep.empirical_rate <= rep.threshold;
}

std::string params_text(const StableParams& params) {
  return "alpha=" + format_double(params.alpha()) + " gamma=" + format_double(params.gamma()) +
         " delta=" + format_double(params.delta());
}

}  // namespace

std::string to_json(const CoverageReport& r) {
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  j["replications"] = r.replications;
  j["violations"] = r.violations;
  j["empirical_rate"] = r.empirical_rate;
  j["bound_p"] = r.bound_p;
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  j["in_contract"] = r.in_contract;
  j["grid_points"] = r.grid_points;
  j["implication_failures"] = r.implication_failures;
  j["level_failures"] = r.level_failures;
  return j.dump(2);
}

CoverageReport coverage_theorem1(const StableParams& params, const BoundConfig& config, Construction construction,
                                 std::size_t reps, std::uint64_t seed, std::size_t grid_points) {
  config.validate();
  require(reps >= kMinReps, "coverage runs need at least 30 replications");
  require(grid_points >= 2, "the u grid needs at least two points");
  if (config.n < n_min(construction, config.epsilon, config.p)) {
    fail(Errc::sample_too_small, "n is below the construction's minimal sample size");
  }
  const double rb = r_bar_value(construction, config);
  if (!(rb > 0.0)) fail(Errc::sample_too_small, "r_bar is zero at this n");

  const double u_max = std::pow(rb, 1.0 / params.alpha()) / params.gamma();
  const std::vector<double> grid = log_grid(u_max * 1e-4, u_max, grid_points);
  std::vector<double> r(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) r[k] = exact_r(params, grid[k]);

  std::vector<char> hits(reps, 0);
  parallel_for(reps, [&](std::size_t i) {
    const Sample s = sample_symmetric_stable(params, static_cast<std::size_t>(config.n), derive_seed(seed, i));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      // Strict: the event is sup |r - r_hat| > epsilon. An ECF zero counts.
      if (!(std::abs(r[k] - r_hat(s, grid[k])) <= config.epsilon)) {
        hits[i] = 1;
        return;
      }
    }
  });

  CoverageReport rep;
  rep.scenario = "theorem1 " + params_text(params) + " construction=" + std::string(construction_name(construction)) +
                 " epsilon=" + format_double(config.epsilon) + " n=" + std::to_string(config.n) +
                 " alpha_min=" + format_double(config.alpha_min) + " r_bar=" + format_double(rb);
  rep.grid_points = grid.size();
  rep.in_contract = params.alpha() >= config.alpha_min;
  finish(rep, hits, config.p);
  return rep;
}

CoverageReport coverage_theorem2(const StableParams& params, const LogBoundScenario& sc, std::size_t reps,
                                 std::uint64_t seed, std::size_t grid_points) {
  require(reps >= kMinReps, "coverage runs need at least 30 replications");
  require(grid_points >= 2, "the u grid needs at least two points");
  require(sc.epsilon > 0.0 && sc.r_under > 0.0, "epsilon and r_under must be positive");
  require(sc.alpha_min > 0.0, "alpha_min must be positive");
  const double scaled = sc.epsilon / (1.0 + sc.epsilon) * sc.r_under;

  double rb = 0.0;
  if (sc.r_bar_override) {
    rb = *sc.r_bar_override;
    require(rb > sc.r_under, "the r-range [r_under, r_bar] is degenerate");
  } else {
    BoundConfig b;
    b.epsilon = scaled;
    b.p = sc.p;
    b.n = sc.n;
    b.L = sc.L;
    b.alpha_min = sc.alpha_min;
    b.alpha_grid_points = sc.alpha_grid_points;
    rb = sc.n < n_min(sc.construction, scaled, sc.p) ? 0.0 : r_bar_value(sc.construction, b);
    if (!(rb > sc.r_under)) fail(Errc::sample_too_small, "r_bar does not exceed r_under at this n");
  }

  const double inv_alpha = 1.0 / params.alpha();
  const std::vector<double> grid = log_grid(std::pow(sc.r_under, inv_alpha) / params.gamma(),
                                            std::pow(rb, inv_alpha) / params.gamma(), grid_points);
  std::vector<double> r(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) r[k] = exact_r(params, grid[k]);

  std::vector<char> hits(reps, 0);
  std::vector<char> broken(reps, 0);
  parallel_for(reps, [&](std::size_t i) {
    const Sample s = sample_symmetric_stable(params, static_cast<std::size_t>(sc.n), derive_seed(seed, i));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double rh = r_hat(s, grid[k]);
      const double log_gap = std::abs(std::log(r[k]) - std::log(rh));  // inf when rh is 0 or inf
      if (!(log_gap <= sc.epsilon)) {
        hits[i] = 1;
        if (std::abs(r[k] - rh) <= scaled) broken[i] = 1;
      }
    }
  });

  CoverageReport rep;
  rep.scenario = "theorem2 " + params_text(params) + " construction=" + std::string(construction_name(sc.construction)) +
                 " epsilon=" + format_double(sc.epsilon) + " r_under=" + format_double(sc.r_under) +
                 " r_bar=" + format_double(rb) + " n=" + std::to_string(sc.n) +
                 " alpha_min=" + format_double(sc.alpha_min);
  rep.grid_points = grid.size();
  rep.in_contract = !sc.r_bar_override && params.alpha() >= sc.alpha_min;
  for (char b : broken) rep.implication_failures += b != 0;
  finish(rep, hits, sc.p);
  return rep;
}

CoverageReport coverage_tapsus(const StableParams& params, const EstimationConfig& ctx, std::size_t reps,
                               std::uint64_t seed, const TapsusOptions& options) {
  require(reps >= kMinReps, "coverage runs need at least 30 replications");
  ctx.validate();
  const EstimationPlan plan = options.plan ? *options.plan : plan_q2(ctx);

  std::vector<char> hits(reps, 0);
  std::vector<char> missed(reps, 0);
  parallel_for(reps, [&](std::size_t i) {
    try {
      EstimateResult est;
      if (options.exact_curve) {
        ExactCurveSource src(params);
        est = execute_plan(plan, ctx, src, false);
      } else {
        SyntheticSource src(params, derive_seed(seed, i));
        est = execute_plan(plan, ctx, src, false);
      }
      if (!(std::abs(est.alpha_hat - params.alpha()) < plan.epsilon1)) hits[i] = 1;
    } catch (const Error& e) {
      if (e.code() != Errc::level_not_reached) throw;
      hits[i] = 1;
      missed[i] = 1;
    }
  });

  CoverageReport rep;
  rep.scenario = "tapsus " + params_text(params) + " construction=" + std::string(construction_name(plan.construction)) +
                 " n=" + std::to_string(plan.n) + " epsilon1=" + format_double(plan.epsilon1) +
                 " r_bar=" + format_double(plan.r_bar) + " r_under=" + format_double(plan.r_under) +
                 " epsilon=" + format_double(plan.epsilon) + " alpha_min=" + format_double(ctx.alpha_min) +
                 (options.exact_curve ? " source=exact" : " source=synthetic");
  rep.in_contract = !options.plan && params.alpha() >= ctx.alpha_min;
  for (char m : missed) rep.level_failures += m != 0;
  finish(rep, hits, ctx.p);
  return rep;
}

namespace {

std::string panel_name(int figure, int panel) {
  return "fig" + std::to_string(figure) + static_cast<char>('a' + panel);
}

std::vector<FigureTable> figure_curves(int figure, const FigureConfig& cfg, std::uint64_t seed) {
  const double alphas[] = {0.2, 1.0, 1.8};
  std::vector<FigureTable> out;
  for (int panel = 0; panel < 3; ++panel) {
    const StableParams params(alphas[panel]);
    const Sample s = sample_symmetric_stable(params, cfg.n, derive_seed(seed, 10 * figure + panel));
    FigureTable t{panel_name(figure, panel), {"u", "r", "r_hat"}, {}};
    for (std::size_t i = 1; i <= cfg.u_points; ++i) {
      const double u = cfg.u_max * static_cast<double>(i) / static_cast<double>(cfg.u_points);
      t.rows.push_back({u, exact_r(params, u), r_hat(s, u)});
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<FigureTable> figure_tails(const FigureConfig& cfg, std::uint64_t seed) {
  const double alphas[] = {0.5, 1.0, 1.5, 1.9};
  std::vector<FigureTable> out;
  for (int panel = 0; panel < 2; ++panel) {
    std::vector<double> t_grid(cfg.t_points);
    for (std::size_t i = 0; i < cfg.t_points; ++i) {
      const double frac = static_cast<double>(i) / static_cast<double>(cfg.t_points);
      // [-5, 0) linearly; [-1e7, 0) with log-spaced magnitudes 1e7 .. 1e-2.
      t_grid[i] = panel == 0 ? -5.0 + 5.0 * frac : -std::pow(10.0, 7.0 - 9.0 * frac);
    }
    FigureTable t{panel_name(3, panel), {"t"}, {}};
    std::vector<std::vector<double>> cols;
    for (std::size_t a = 0; a < std::size(alphas); ++a) {
      t.columns.push_back("alpha_" + format_double(alphas[a]));
      cols.push_back(tail_ratio_curve(StableParams(alphas[a]), t_grid, cfg.mc_n, derive_seed(seed, 30 + a)));
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      std::vector<double> row{t_grid[i]};
      for (const auto& c : cols) row.push_back(c[i]);
      t.rows.push_back(std::move(row));
    }
    out.push_back(std::move(t));
  }
  return out;
}

BoundConfig figure_bound(const FigureConfig& cfg, std::uint64_t n, double alpha_min) {
  BoundConfig b;
  b.epsilon = cfg.epsilon;
  b.p = cfg.p;
  b.n = n;
  b.L = cfg.L;
  b.alpha_min = alpha_min;
  b.alpha_grid_points = cfg.alpha_grid_points;
  return b;
}

std::vector<FigureTable> figure_rn(const FigureConfig& cfg) {
  const std::uint64_t ns[] = {1000, 128551, 300000};
  std::vector<FigureTable> out;
  for (int panel = 0; panel < 3; ++panel) {
    const BoundConfig b = figure_bound(cfg, ns[panel], 0.01);
    const BoundCurve lemma = r_bar_lemma(b);
    const BoundCurve alt = r_bar_alt(b);
    FigureTable t{panel_name(4, panel), {"alpha", "lemma", "alternative"}, {}};
    for (std::size_t i = 0; i < lemma.alphas.size(); ++i) {
      t.rows.push_back({lemma.alphas[i], lemma.r_values[i], alt.r_values[i]});
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<FigureTable> figure_rbar(const FigureConfig& cfg) {
  const double alpha_mins[] = {0.01, 0.1, 0.5};
  const std::vector<double> n_grid = log_grid(1e3, 1e8, cfg.n_points);
  std::vector<FigureTable> out;
  for (int panel = 0; panel < 3; ++panel) {
    FigureTable t{panel_name(5, panel), {"n", "lemma", "alternative"}, {}};
    for (double nd : n_grid) {
      const auto n = static_cast<std::uint64_t>(std::llround(nd));
      const BoundConfig b = figure_bound(cfg, n, alpha_mins[panel]);
      t.rows.push_back({static_cast<double>(n), r_bar_value(Construction::lemma, b),
                        r_bar_value(Construction::alternative, b)});
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::vector<FigureTable> figure_data(int figure, const FigureConfig& config, std::uint64_t seed) {
  switch (figure) {
    case 1:
    case 2:
      return figure_curves(figure, config, seed);
    case 3:
      return figure_tails(config, seed);
    case 4:
      return figure_rn(config);
    case 5:
      return figure_rbar(config);
    default:
      fail(Errc::invalid_arguments, "figure must be 1 to 5");
  }
}

void write_csv(std::ostream& os, const FigureTable& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

}  // namespace symstable
