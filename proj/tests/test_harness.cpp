#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "symstable/error.hpp"
#include "symstable/harness.hpp"

using namespace symstable;

namespace {

template <class F>
Errc code_of(F f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no symstable::Error thrown";
  return Errc::domain;
}

BoundConfig small_bound() {
  BoundConfig b;
  b.epsilon = 0.3;
  b.p = 0.2;
  b.n = 2000;
  b.alpha_min = 0.5;
  b.alpha_grid_points = 50;
  return b;
}

FigureConfig small_figures() {
  FigureConfig c;
  c.n = 2000;
  c.u_points = 20;
  c.mc_n = 5000;
  c.t_points = 10;
  c.alpha_grid_points = 40;
  c.n_points = 8;
  return c;
}

}  // namespace

TEST(SupCoverage, SmallRunIsDeterministicAndCovers) {
  const StableParams p(1.2, 0.8);
  const CoverageReport a = coverage_theorem1(p, small_bound(), Construction::lemma, 30, 5, 256);
  const CoverageReport b = coverage_theorem1(p, small_bound(), Construction::lemma, 30, 5, 256);
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_EQ(a.replications, 30u);
  EXPECT_EQ(a.grid_points, 256u);
  EXPECT_TRUE(a.in_contract);
  EXPECT_TRUE(a.pass);
  EXPECT_NEAR(a.threshold, 0.2 + 3.0 * std::sqrt(0.2 * 0.8 / 30.0), 1e-15);
  EXPECT_EQ(a.empirical_rate, static_cast<double>(a.violations) / 30.0);
}

TEST(SupCoverage, Rejections) {
  const StableParams p(1.0);
  EXPECT_EQ(code_of([&] { coverage_theorem1(p, small_bound(), Construction::lemma, 29, 1); }), Errc::precondition);
  BoundConfig b = small_bound();
  b.n = 100;
  EXPECT_EQ(code_of([&] { coverage_theorem1(p, b, Construction::lemma, 30, 1); }), Errc::sample_too_small);
  EXPECT_EQ(code_of([&] { coverage_theorem1(p, small_bound(), Construction::alternative, 30, 1); }),
            Errc::sample_too_small);
}

TEST(SupCoverage, BelowAlphaMinIsOutOfContract) {
  const CoverageReport r = coverage_theorem1(StableParams(0.3), small_bound(), Construction::lemma, 30, 2, 64);
  EXPECT_FALSE(r.in_contract);
}

TEST(LogCoverage, OverrideKeepsImplication) {
  LogBoundScenario sc;
  sc.n = 2000;
  sc.r_bar_override = 0.5;
  const StableParams p(1.5, 2.0);
  const CoverageReport a = coverage_theorem2(p, sc, 30, 9, 256);
  EXPECT_EQ(a.implication_failures, 0u);
  EXPECT_FALSE(a.in_contract);
  EXPECT_EQ(coverage_theorem2(p, sc, 30, 9, 256).violations, a.violations);

  sc.r_bar_override = 0.1;
  EXPECT_EQ(code_of([&] { coverage_theorem2(p, sc, 30, 9); }), Errc::precondition);
  sc.r_bar_override.reset();
  EXPECT_EQ(code_of([&] { coverage_theorem2(p, sc, 30, 9); }), Errc::sample_too_small);
}

TEST(Tapsus, ExactCurveHandPlan) {
  EstimationPlan plan;
  plan.n = 1000;
  plan.rho = 0.01;
  plan.epsilon = 0.02;
  plan.r_bar = 0.6;
  plan.r_under = 0.05;
  plan.epsilon1 = 0.1;
  EstimationConfig ctx;
  ctx.p = 0.2;
  ctx.n = 1000;
  TapsusOptions opt;
  opt.exact_curve = true;
  opt.plan = plan;
  const CoverageReport r = coverage_tapsus(StableParams(1.3, 0.4), ctx, 30, 3, opt);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_EQ(r.level_failures, 0u);
  EXPECT_FALSE(r.in_contract);
  EXPECT_TRUE(r.pass);
}

TEST(Tapsus, SyntheticHandPlanIsDeterministic) {
  EstimationPlan plan;
  plan.n = 20000;
  plan.epsilon = 0.02;
  plan.r_bar = 0.6;
  plan.r_under = 0.05;
  plan.epsilon1 = 0.3;
  EstimationConfig ctx;
  ctx.p = 0.2;
  ctx.n = 20000;
  TapsusOptions opt;
  opt.plan = plan;
  const CoverageReport a = coverage_tapsus(StableParams(1.5), ctx, 30, 4, opt);
  const CoverageReport b = coverage_tapsus(StableParams(1.5), ctx, 30, 4, opt);
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_LE(a.violations, 3u);
}

TEST(Coverage, JsonFields) {
  CoverageReport r;
  r.scenario = "x";
  r.replications = 30;
  const auto j = nlohmann::json::parse(to_json(r));
  for (const char* k : {"scenario", "replications", "violations", "empirical_rate", "bound_p", "threshold", "pass",
                        "in_contract", "implication_failures", "level_failures"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
}

TEST(Figures, CurvesMatchExactR) {
  const auto tables = figure_data(1, small_figures(), 1);
  ASSERT_EQ(tables.size(), 3u);
  EXPECT_EQ(tables[0].name, "fig1a");
  for (const auto& row : tables[0].rows) EXPECT_NEAR(row[1], std::pow(row[0], 0.2), 1e-13);
  for (const auto& row : tables[2].rows) EXPECT_NEAR(row[1], std::pow(row[0], 1.8), 1e-12 * row[1]);
  // Figure 2 is an independent replicate.
  const auto again = figure_data(2, small_figures(), 1);
  EXPECT_NE(tables[1].rows[0][2], again[1].rows[0][2]);
  EXPECT_EQ(tables[1].rows[0][1], again[1].rows[0][1]);
}

TEST(Figures, TailPanels) {
  const auto tables = figure_data(3, small_figures(), 1);
  ASSERT_EQ(tables.size(), 2u);
  EXPECT_EQ(tables[1].columns.size(), 5u);
  for (const auto& t : tables) {
    for (const auto& row : t.rows) {
      EXPECT_LT(row[0], 0.0);
      for (std::size_t k = 1; k < row.size(); ++k) EXPECT_GE(row[k], 0.0);
    }
  }
}

TEST(Figures, BoundCurvesAtSmallN) {
  const auto tables = figure_data(4, small_figures(), 1);
  ASSERT_EQ(tables.size(), 3u);
  for (const auto& row : tables[0].rows) {
    EXPECT_EQ(row[1], 0.0);
    EXPECT_EQ(row[2], 0.0);
  }
  for (const auto& row : tables[2].rows) {
    EXPECT_GT(row[1], 0.0);
    EXPECT_GE(row[2], 0.0);
  }
}

TEST(Figures, RBarGrowsWithN) {
  const auto tables = figure_data(5, small_figures(), 1);
  ASSERT_EQ(tables.size(), 3u);
  for (const auto& t : tables) {
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
      EXPECT_GT(t.rows[i][0], t.rows[i - 1][0]);
      EXPECT_GE(t.rows[i][1], t.rows[i - 1][1]) << t.name;
      EXPECT_GE(t.rows[i][2], t.rows[i - 1][2]) << t.name;
    }
  }
  // A larger alpha_min never lowers the bound.
  for (std::size_t i = 0; i < tables[0].rows.size(); ++i) {
    EXPECT_LE(tables[0].rows[i][1], tables[2].rows[i][1]);
  }
}

TEST(Figures, CsvAndErrors) {
  FigureTable t{"figx", {"a", "b"}, {{1.0, 0.5}}};
  std::ostringstream os;
  write_csv(os, t);
  EXPECT_EQ(os.str(), "a,b\n1,0.5\n");
  EXPECT_EQ(code_of([] { figure_data(6, FigureConfig{}, 1); }), Errc::invalid_arguments);
}
