#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "symstable/ecf.hpp"
#include "symstable/error.hpp"
#include "symstable/rng.hpp"

using namespace symstable;

namespace {

CurveFn exact_curve(double alpha, double gamma) {
  const StableParams p(alpha, gamma);
  return [p](double u) { return exact_r(p, u); };
}

}  // namespace

TEST(Ecf, TwoPointClosedForm) {
  const double a = 1.7;
  const Sample s({a, -a});
  EXPECT_EQ(ecf_eval(s, 0.0), std::complex<double>(1.0, 0.0));
  for (double u : {0.1, 0.4, 0.9}) {
    const auto phi = ecf_eval(s, u);
    EXPECT_NEAR(phi.real(), std::cos(u * a), 1e-15);
    EXPECT_NEAR(phi.imag(), 0.0, 1e-15);
  }
  // cos(ua) = 1/e gives r-hat = 1
  const double u = std::acos(std::exp(-1.0)) / a;
  EXPECT_NEAR(r_hat(s, u), 1.0, 1e-12);
  EXPECT_TRUE(std::isinf(r_hat(s, std::numbers::pi / 2.0 / a)));
  EXPECT_EQ(r_hat(s, 0.0), 0.0);
}

TEST(Ecf, SingleAtomHasUnitModulus) {
  const Sample s({3.3});
  for (double u : {0.2, 5.0, 100.0}) {
    EXPECT_NEAR(std::abs(ecf_eval(s, u)), 1.0, 1e-15);
    EXPECT_NEAR(r_hat(s, u), 0.0, 1e-15);
  }
}

TEST(Ecf, SymmetryShiftAndSign) {
  const Sample s = sample_symmetric_stable(StableParams(1.3), 2000, 17);
  std::vector<double> shifted(s.values().begin(), s.values().end());
  for (double& v : shifted) v += 12.5;
  const Sample t(shifted);
  for (double u : {0.05, 0.3, 1.1, 2.0}) {
    const double r = r_hat(s, u);
    EXPECT_GE(r, 0.0);
    EXPECT_NEAR(r, r_hat(s, -u), 1e-12);
    EXPECT_NEAR(r, r_hat(t, u), 1e-9);
  }
}

// Consistency: sup over {r(u) <= 0.5} of |r - r_hat| stays below 0.1 in at
// least 95% of seeded runs at n = 1e5.
TEST(Ecf, ConsistencyAtDeskScale) {
  const std::size_t n = 100000;
  const int runs = 40;
  for (double a : {0.5, 1.0, 1.5, 2.0}) {
    const StableParams p(a);
    const double u_top = std::pow(0.5, 1.0 / a);
    int good = 0;
    for (int run = 0; run < runs; ++run) {
      const Sample s = sample_symmetric_stable(p, n, derive_seed(77, run));
      double sup = 0.0;
      for (int k = 1; k <= 20; ++k) {
        const double u = u_top * k / 20.0;
        sup = std::max(sup, std::abs(exact_r(p, u) - r_hat(s, u)));
      }
      good += sup < 0.1;
    }
    EXPECT_GE(good, runs * 95 / 100) << "alpha=" << a;
  }
}

TEST(LevelSearch, ExactCurveOracles) {
  ScanConfig scan;
  LevelCrossing lc = find_u_levels(exact_curve(1.0, 1.0), 0.5, 0.1, scan);
  EXPECT_NEAR(lc.u1, 0.5, 1e-12);
  EXPECT_NEAR(lc.u2, 0.1, 1e-12);
  EXPECT_LT(lc.u2, lc.u1);

  lc = find_u_levels(exact_curve(0.5, 1.0), 0.5, 0.1, scan);
  EXPECT_NEAR(lc.u1, 0.25, 1e-12);
  EXPECT_NEAR(lc.u2, 0.01, 1e-12);
  EXPECT_LE(lc.residual_hi, 1e-8);
  EXPECT_LE(lc.residual_lo, 1e-8);
}

TEST(LevelSearch, RecoversInverseForManyLaws) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(0.2, 2.0);
    const double g = std::exp(rng.uniform(-2.0, 2.0));
    const LevelCrossing lc = find_u_levels(exact_curve(a, g), 0.7, 0.05, ScanConfig::for_scale(g));
    EXPECT_NEAR(lc.u1, std::pow(0.7, 1.0 / a) / g, 1e-8 * lc.u1);
    EXPECT_NEAR(lc.u2, std::pow(0.05, 1.0 / a) / g, 1e-8 * lc.u2);
  }
}

TEST(LevelSearch, Errors) {
  ScanConfig scan;
  const auto curve = exact_curve(1.0, 1.0);
  auto code = [&](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::domain;
  };
  EXPECT_EQ(code([&] { find_u_levels(curve, 0.1, 0.5, scan); }), Errc::precondition);
  EXPECT_EQ(code([&] { find_u_levels(curve, 0.1, 0.1, scan); }), Errc::precondition);
  // u_max = 1 and r(1) = 1: level 2 is out of reach.
  EXPECT_EQ(code([&] { find_u_levels(curve, 2.0, 0.1, scan); }), Errc::level_not_reached);
  // The two-point ECF vanishes at u = pi/2; level 40 is beyond the sentinel.
  const Sample two({1.0, -1.0});
  EXPECT_EQ(code([&] { find_u_levels(two, 40.0, 0.1, ScanConfig{1e-3, 1e-3, 10.0, 1e-8}); }), Errc::level_not_reached);
  EXPECT_EQ(code([&] { find_u_levels(Sample({1.0, 1.0}), 0.5, 0.1); }), Errc::degenerate_sample);
}

TEST(LevelSearch, SampleDefaultsAreScaleAware) {
  const Sample s = sample_symmetric_stable(StableParams(1.5, 40.0), 20000, 3);
  const LevelCrossing lc = find_u_levels(s, 0.5, 0.1);
  const double u1 = std::pow(0.5, 1.0 / 1.5) / 40.0;
  EXPECT_NEAR(lc.u1, u1, 0.1 * u1);
  EXPECT_LT(lc.u2, lc.u1);
}
