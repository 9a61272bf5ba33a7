#include "symstable/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "symstable/error.hpp"
#include "symstable/rng.hpp"

namespace symstable {

namespace {

constexpr std::uint64_t kNCap = std::uint64_t{1} << 62;

// Same sign as n - n_o(rho, p): positive iff n exceeds the threshold.
double n_slack(std::uint64_t n, Construction c, double rho, double p) {
  const std::uint64_t least = n_min(c, rho, p);
  return static_cast<double>(n) - static_cast<double>(least - 1);
}

double rbar_at(const EstimationConfig& ctx, double rho, std::uint64_t n) {
  if (n < n_min(ctx.construction, rho, ctx.p)) return 0.0;  // both constructions give 0 here
  return r_bar_value(ctx.construction, ctx.bound_config(rho, n));
}

struct EpsBest {
  double value = -std::numeric_limits<double>::infinity();
  double eps = 0.0;
};

EpsBest best_eps(double r_bar, double rho, double epsilon1, const std::vector<double>& eps_grid) {
  EpsBest best;
  for (double eps : eps_grid) {
    const double v = f_value(r_bar, rho, eps, epsilon1);
    if (v > best.value) best = {v, eps};
  }
  return best;
}

const EstimationConfig& checked_q1(const EstimationConfig& ctx) {
  ctx.validate();
  require(ctx.epsilon1.has_value(), "epsilon1 must be set");
  return ctx;
}

const EstimationConfig& checked_q2(const EstimationConfig& ctx) {
  ctx.validate();
  require(ctx.n.has_value(), "n must be set");
  return ctx;
}

// Sup over rho of min(F(n, rho), n - n_o). Among feasible rho (min > 0) the
// pair with the largest F wins; otherwise the largest min is reported. With
// stop_at_positive the scan ends at the first feasible rho.
FArgmax q1_outer(std::uint64_t n, const EstimationConfig& ctx, bool stop_at_positive) {
  FArgmax feasible;
  FArgmax fallback;
  for (double rho : ctx.rho_grid) {
    const double slack = n_slack(n, ctx.construction, rho, ctx.p);
    const double rb = slack > 0.0 ? rbar_at(ctx, rho, n) : 0.0;
    const EpsBest e = best_eps(rb, rho, *ctx.epsilon1, ctx.eps_grid);
    const double v = std::min(e.value, slack);
    if (v > 0.0) {
      if (e.value > feasible.value) feasible = {e.value, rho, e.eps, rb};
      if (stop_at_positive) break;
    } else if (v > fallback.value) {
      fallback = {v, rho, e.eps, rb};
    }
  }
  return feasible.value > 0.0 ? feasible : fallback;
}

struct Q2Table {
  std::vector<double> rho;
  std::vector<double> r_bar;
};

Q2Table q2_table(const EstimationConfig& ctx) {
  Q2Table t;
  for (double rho : ctx.rho_grid) {
    if (n_slack(*ctx.n, ctx.construction, rho, ctx.p) <= 0.0) continue;
    t.rho.push_back(rho);
    t.r_bar.push_back(rbar_at(ctx, rho, *ctx.n));
  }
  return t;
}

FArgmax q2_outer(double epsilon1, const Q2Table& t, const EstimationConfig& ctx) {
  FArgmax best;
  for (std::size_t i = 0; i < t.rho.size(); ++i) {
    const EpsBest e = best_eps(t.r_bar[i], t.rho[i], epsilon1, ctx.eps_grid);
    if (e.value > best.value) best = {e.value, t.rho[i], e.eps, t.r_bar[i]};
  }
  return best;
}

bool chain_holds(double r_bar, double r_under, double eps, double epsilon1) {
  const double top = r_bar - 2.0 * eps;
  const double bottom = r_under + 2.0 * eps;
  if (!(top > bottom) || !(bottom > 0.0)) return false;
  return epsilon1 / 4.0 * std::log(top / bottom) >= eps;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  require(lo > 0.0 && hi >= lo, "log_grid needs 0 < lo <= hi");
  require(count >= 1, "log_grid needs at least one point");
  if (count == 1) return {lo};
  std::vector<double> grid(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

void EstimationConfig::validate() const {
  require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  require(alpha_min > 0.0 && alpha_min < 2.0, "alpha_min must lie in (0, 2)");
  require(!rho_grid.empty() && !eps_grid.empty(), "search grids must be nonempty");
  for (double v : rho_grid) require(v > 0.0 && std::isfinite(v), "rho grid entries must be positive");
  for (double v : eps_grid) require(v > 0.0 && std::isfinite(v), "epsilon grid entries must be positive");
  if (epsilon1) require(*epsilon1 > 0.0 && std::isfinite(*epsilon1), "epsilon1 must be positive");
  if (n) require(*n >= 1, "n must be at least 1");
  require(L > 0.0 && std::isfinite(L), "L must be positive");
  require(alpha_grid_points >= 2, "the alpha grid needs at least two points");
}

BoundConfig EstimationConfig::bound_config(double rho, std::uint64_t n_) const {
  BoundConfig b;
  b.epsilon = rho;
  b.p = p;
  b.n = n_;
  b.L = L;
  b.alpha_min = alpha_min;
  b.alpha_grid_points = alpha_grid_points;
  return b;
}

std::string to_json(const EstimateResult& r) {
  nlohmann::ordered_json j;
  j["alpha_hat"] = r.alpha_hat;
  j["u1"] = r.u1;
  j["u2"] = r.u2;
  j["r_bar"] = r.r_bar;
  j["r_under"] = r.r_under;
  j["epsilon"] = r.epsilon;
  j["epsilon1"] = r.epsilon1;
  j["ci_lo"] = r.ci_lo;
  j["ci_hi"] = r.ci_hi;
  j["n"] = r.n;
  j["construction"] = std::string(construction_name(r.construction));
  auto& d = j["diagnostics"];
  d["procedure"] = r.diagnostics.procedure;
  d["rho"] = r.diagnostics.rho;
  d["f_value"] = r.diagnostics.f_value;
  if (r.diagnostics.n1) {
    d["n1"] = *r.diagnostics.n1;
  } else {
    d["n1"] = nullptr;
  }
  d["residual_hi"] = r.diagnostics.residual_hi;
  d["residual_lo"] = r.diagnostics.residual_lo;
  d["guarantee_chain"] = r.diagnostics.guarantee_chain;
  d["ci_clipped"] = r.diagnostics.ci_clipped;
  return j.dump(2);
}

double alpha_hat_two_point(const CurveFn& curve, double u1, double u2) {
  require(u2 > 0.0 && u1 > u2 && std::isfinite(u1), "need 0 < u2 < u1");
  const double r1 = curve(u1);
  const double r2 = curve(u2);
  if (!(r1 > 0.0) || !(r2 > 0.0) || std::isinf(r1) || std::isinf(r2)) {
    fail(Errc::invalid_arguments, "r-hat is 0 or infinite at a chosen argument");
  }
  return (std::log(r1) - std::log(r2)) / (std::log(u1) - std::log(u2));
}

double alpha_hat_two_point(const Sample& sample, double u1, double u2) {
  if (sample.degenerate()) fail(Errc::degenerate_sample, "all sample values are equal");
  return alpha_hat_two_point([&](double u) { return r_hat(sample, u); }, u1, u2);
}

EstimateResult alpha_hat_levels(const CurveFn& curve, const ScanConfig& scan, double r_bar, double r_under,
                                double epsilon) {
  require(epsilon >= 0.0 && std::isfinite(epsilon), "epsilon must be nonnegative");
  require(r_under + epsilon > 0.0, "the lower level must be positive");
  require(r_under + epsilon < r_bar - epsilon, "need r_under + epsilon < r_bar - epsilon");
  const double hi = r_bar - epsilon;
  const double lo = r_under + epsilon;
  const LevelCrossing lc = find_u_levels(curve, hi, lo, scan);

  EstimateResult out;
  out.alpha_hat = (std::log(hi) - std::log(lo)) / (std::log(lc.u1) - std::log(lc.u2));
  out.u1 = lc.u1;
  out.u2 = lc.u2;
  out.r_bar = r_bar;
  out.r_under = r_under;
  out.epsilon = epsilon;
  out.diagnostics.residual_hi = lc.residual_hi;
  out.diagnostics.residual_lo = lc.residual_lo;
  out.diagnostics.procedure = "levels";
  return out;
}

EstimateResult alpha_hat_levels(const Sample& sample, double r_bar, double r_under, double epsilon) {
  if (sample.degenerate()) fail(Errc::degenerate_sample, "all sample values are equal");
  auto shared = std::make_shared<const Sample>(sample);
  EstimateResult out = alpha_hat_levels(RHatCurve(shared), ScanConfig::for_sample(sample), r_bar, r_under, epsilon);
  out.n = sample.size();
  return out;
}

double epsilon1_min(double r_bar, double r_under, double epsilon) {
  require(epsilon > 0.0, "epsilon must be positive");
  const double top = r_bar - 2.0 * epsilon;
  const double bottom = r_under + 2.0 * epsilon;
  if (!(top > bottom) || !(bottom > 0.0)) {
    fail(Errc::precision_gap_too_narrow, "need r_bar - 2 eps > r_under + 2 eps > 0");
  }
  return 4.0 * epsilon / std::log(top / bottom);
}

std::uint64_t compute_n1(double epsilon, double p, double alpha_min, double r_under, Construction construction,
                         double L, std::size_t alpha_grid_points) {
  require(epsilon > 0.0, "epsilon must be positive");
  require(alpha_min > 0.0 && alpha_min < 2.0, "alpha_min must lie in (0, 2)");
  require(r_under > 0.0 && std::isfinite(r_under), "r_under must be positive");
  const double scaled = epsilon / (1.0 + epsilon) * r_under;
  BoundConfig b;
  b.epsilon = scaled;
  b.p = p;
  b.L = L;
  b.alpha_min = alpha_min;
  b.alpha_grid_points = alpha_grid_points;
  b.validate();

  const std::uint64_t least = n_min(construction, scaled, p);
  auto ok = [&](std::uint64_t n) {
    if (n < least) return false;
    b.n = n;
    return r_bar_value(construction, b) > r_under;
  };

  std::uint64_t lo = least - 1;  // known false
  std::uint64_t hi = std::max<std::uint64_t>(least, 1);
  while (!ok(hi)) {
    if (hi >= kNCap) fail(Errc::sample_too_small, "no n up to 2^62 satisfies the log-scale bound");
    lo = hi;
    hi = std::min(hi * 2, kNCap);
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double f_value(double r_bar, double rho, double eps, double epsilon1) {
  return (r_bar - 2.0 * eps) / (rho * (1.0 + eps) / eps + 2.0 * eps) - std::exp(4.0 * eps / epsilon1);
}

double F_q1(std::uint64_t n, double rho, double eps, const EstimationConfig& ctx) {
  checked_q1(ctx);
  return f_value(rbar_at(ctx, rho, n), rho, eps, *ctx.epsilon1);
}

double F_q1_sup_eps(std::uint64_t n, double rho, const EstimationConfig& ctx) {
  checked_q1(ctx);
  return best_eps(rbar_at(ctx, rho, n), rho, *ctx.epsilon1, ctx.eps_grid).value;
}

double F_q1_outer(std::uint64_t n, const EstimationConfig& ctx) {
  checked_q1(ctx);
  double best = -std::numeric_limits<double>::infinity();
  for (double rho : ctx.rho_grid) {
    const double slack = n_slack(n, ctx.construction, rho, ctx.p);
    const double rb = slack > 0.0 ? rbar_at(ctx, rho, n) : 0.0;
    best = std::max(best, std::min(best_eps(rb, rho, *ctx.epsilon1, ctx.eps_grid).value, slack));
  }
  return best;
}

double F_q2(double epsilon1, double rho, double eps, const EstimationConfig& ctx) {
  checked_q2(ctx);
  require(epsilon1 > 0.0, "epsilon1 must be positive");
  return f_value(rbar_at(ctx, rho, *ctx.n), rho, eps, epsilon1);
}

double F_q2_sup_eps(double epsilon1, double rho, const EstimationConfig& ctx) {
  checked_q2(ctx);
  require(epsilon1 > 0.0, "epsilon1 must be positive");
  return best_eps(rbar_at(ctx, rho, *ctx.n), rho, epsilon1, ctx.eps_grid).value;
}

double F_q2_outer(double epsilon1, const EstimationConfig& ctx) {
  checked_q2(ctx);
  require(epsilon1 > 0.0, "epsilon1 must be positive");
  return q2_outer(epsilon1, q2_table(ctx), ctx).value;
}

EstimationPlan plan_q1(const EstimationConfig& ctx) {
  checked_q1(ctx);
  // Below the smallest n_o over the grid every rho is infeasible.
  std::uint64_t start = std::numeric_limits<std::uint64_t>::max();
  for (double rho : ctx.rho_grid) start = std::min(start, n_min(ctx.construction, rho, ctx.p));
  auto ok = [&](std::uint64_t n) { return q1_outer(n, ctx, true).value > 0.0; };

  std::uint64_t lo = start - 1;
  std::uint64_t hi = std::min(start, kNCap);
  while (!ok(hi)) {
    if (hi >= kNCap) fail(Errc::sample_too_small, "no n up to 2^62 makes F positive");
    lo = hi;
    hi = std::min(hi * 2, kNCap);
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  const FArgmax best = q1_outer(hi, ctx, false);
  EstimationPlan plan;
  plan.n = hi;
  plan.rho = best.rho;
  plan.epsilon = best.eps;
  plan.r_bar = best.r_bar;
  plan.r_under = best.rho * (1.0 + best.eps) / best.eps;
  plan.epsilon1 = *ctx.epsilon1;
  plan.f_value = best.value;
  plan.construction = ctx.construction;
  plan.procedure = "q1";
  return plan;
}

EstimationPlan plan_q2(const EstimationConfig& ctx) {
  checked_q2(ctx);
  const Q2Table table = q2_table(ctx);
  if (table.rho.empty()) fail(Errc::sample_too_small, "n does not exceed n_o for any grid rho");

  constexpr double kEps1Max = 2.0;
  if (!(q2_outer(kEps1Max, table, ctx).value > 0.0)) {
    fail(Errc::sample_too_small_for_any_ci, "no epsilon1 <= 2 makes F positive at this n");
  }
  // F grows with epsilon1 (only exp(4 eps / eps1) depends on it).
  double lo = 0.0;
  double hi = kEps1Max;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (q2_outer(mid, table, ctx).value > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  const FArgmax best = q2_outer(hi, table, ctx);
  EstimationPlan plan;
  plan.n = *ctx.n;
  plan.rho = best.rho;
  plan.epsilon = best.eps;
  plan.r_bar = best.r_bar;
  plan.r_under = best.rho * (1.0 + best.eps) / best.eps;
  plan.epsilon1 = hi;
  plan.f_value = best.value;
  plan.construction = ctx.construction;
  plan.procedure = "q2";
  return plan;
}

DataSource::Draw SyntheticSource::draw(std::uint64_t n) {
  if (n > max_n_) fail(Errc::data_source_too_small, "synthetic source is capped below the requested n");
  auto sample = std::make_shared<const Sample>(
      sample_symmetric_stable(params_, static_cast<std::size_t>(n), derive_seed(seed_, draws_++)));
  Draw d;
  d.scan = ScanConfig::for_sample(*sample);
  d.curve = RHatCurve(sample);
  d.sample = std::move(sample);
  return d;
}

DataSource::Draw SampleSource::draw(std::uint64_t n) {
  if (n > sample_->size()) fail(Errc::data_source_too_small, "the data set has fewer values than n");
  std::shared_ptr<const Sample> use = sample_;
  if (n < sample_->size()) {
    auto v = sample_->values().first(static_cast<std::size_t>(n));
    use = std::make_shared<const Sample>(std::vector<double>(v.begin(), v.end()));
  }
  if (use->degenerate()) fail(Errc::degenerate_sample, "all sample values are equal");
  Draw d;
  d.scan = ScanConfig::for_sample(*use);
  d.curve = RHatCurve(use);
  d.sample = std::move(use);
  return d;
}

DataSource::Draw ExactCurveSource::draw(std::uint64_t /*n*/) {
  // Reach r = 100 in 1e5 steps; levels below the first step are bracketed
  // against u = 0 by the level search.
  const double u_top = std::pow(100.0, 1.0 / params_.alpha()) / params_.gamma();
  Draw d;
  d.scan.du = u_top * 1e-5;
  d.scan.u_start = d.scan.du;
  d.scan.u_max = u_top;
  const StableParams params = params_;
  d.curve = [params](double u) { return exact_r(params, u); };
  return d;
}

EstimateResult execute_plan(const EstimationPlan& plan, const EstimationConfig& ctx, DataSource& source,
                            bool with_n1) {
  DataSource::Draw draw = source.draw(plan.n);
  EstimateResult out = alpha_hat_levels(draw.curve, draw.scan, plan.r_bar, plan.r_under, plan.epsilon);
  out.n = plan.n;
  out.construction = plan.construction;
  out.epsilon1 = plan.epsilon1;

  const double lo = out.alpha_hat - plan.epsilon1;
  const double hi = out.alpha_hat + plan.epsilon1;
  out.ci_lo = std::clamp(lo, 0.0, 2.0);
  out.ci_hi = std::max(std::min(hi, 2.0), out.ci_lo);
  out.diagnostics.ci_clipped = out.ci_lo != lo || out.ci_hi != hi;

  out.diagnostics.procedure = plan.procedure;
  out.diagnostics.rho = plan.rho;
  out.diagnostics.f_value = plan.f_value;
  out.diagnostics.guarantee_chain = chain_holds(plan.r_bar, plan.r_under, plan.epsilon, plan.epsilon1);
  if (with_n1) {
    out.diagnostics.n1 = compute_n1(plan.epsilon, ctx.p, ctx.alpha_min, plan.r_under, plan.construction, ctx.L,
                                    ctx.alpha_grid_points);
  }
  return out;
}

EstimateResult procedure1(const EstimationConfig& ctx, DataSource& source) {
  return execute_plan(plan_q1(ctx), ctx, source);
}

EstimateResult procedure2(const EstimationConfig& ctx, DataSource& source) {
  return execute_plan(plan_q2(ctx), ctx, source);
}

}  // namespace symstable
