#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "symstable/ecf.hpp"
#include "symstable/error.hpp"
#include "symstable/rng.hpp"
#include "symstable/stable_core.hpp"
#include "symstable/text.hpp"

using namespace symstable;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no symstable::Error thrown";
  return Errc::precondition;
}

}  // namespace

TEST(Text, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e300, 128550.0, 0.0}) {
    double back = 0.0;
    ASSERT_TRUE(parse_double(format_double(v), back));
    EXPECT_EQ(back, v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(INFINITY), "inf");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(Text, ParseRejectsJunk) {
  double v = 0.0;
  EXPECT_FALSE(parse_double("1.5x", v));
  EXPECT_FALSE(parse_double("", v));
  EXPECT_FALSE(parse_double("abc", v));
  EXPECT_TRUE(parse_double("  +2.5 ", v));
  EXPECT_EQ(v, 2.5);
}

TEST(Rng, DeterministicAndOpenInterval) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform_open();
    EXPECT_EQ(x, b.uniform_open());
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(9, 5), derive_seed(9, 5));
}

TEST(Rng, ExponentialMean) {
  Rng r(3);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += r.exponential();
  EXPECT_NEAR(sum / n, 1.0, 5.0 / std::sqrt(n));
}

TEST(StableParams, DomainChecks) {
  EXPECT_EQ(code_of([] { StableParams(0.0); }), Errc::domain);
  EXPECT_EQ(code_of([] { StableParams(2.1); }), Errc::domain);
  EXPECT_EQ(code_of([] { StableParams(1.0, 0.0); }), Errc::domain);
  EXPECT_EQ(code_of([] { StableParams(1.0, 1.0, NAN); }), Errc::domain);
  EXPECT_NO_THROW(StableParams(2.0, 3.0, -1.0));
}

TEST(ExactCurve, ModulusMatchesR) {
  for (double a : {0.3, 1.0, 1.7, 2.0}) {
    const StableParams p(a, 1.3, 0.4);
    for (double u : {0.01, 0.5, 1.0, 3.0}) {
      EXPECT_NEAR(std::abs(exact_cf(p, u)), std::exp(-exact_r(p, u)), 1e-15);
      EXPECT_NEAR(exact_r(p, u), exact_r(StableParams(a), 1.3 * u), 1e-13 * exact_r(p, u));
      EXPECT_LT(exact_r(p, u), exact_r(p, u * 1.01));
    }
  }
}

TEST(Sampler, GaussianMoments) {
  const Sample s = sample_symmetric_stable(StableParams(2.0), 100000, 11);
  double mean = 0.0;
  for (double v : s.values()) mean += v;
  mean /= 1e5;
  double var = 0.0;
  for (double v : s.values()) var += (v - mean) * (v - mean);
  var /= 1e5 - 1;
  // sd of the mean is sqrt(2/n); of the variance about 2 sqrt(2/n)
  EXPECT_NEAR(mean, 0.0, 5.0 * std::sqrt(2.0 / 1e5));
  EXPECT_NEAR(var, 2.0, 5.0 * 2.0 * std::sqrt(2.0 / 1e5));
}

TEST(Sampler, CauchyEcfAtOne) {
  const Sample s = sample_symmetric_stable(StableParams(1.0), 100000, 5);
  EXPECT_NEAR(std::abs(ecf_eval(s, 1.0)), std::exp(-1.0), 4.0 / std::sqrt(1e5));
}

TEST(Sampler, SameSeedSameSample) {
  const StableParams p(0.7, 2.0, 1.0);
  const Sample a = sample_symmetric_stable(p, 500, 99);
  const Sample b = sample_symmetric_stable(p, 500, 99);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.values()[i], b.values()[i]);
  const Sample c = sample_symmetric_stable(p, 500, 100);
  EXPECT_NE(a.values()[0], c.values()[0]);
}

TEST(Sampler, NearOneUsesCauchyForm) {
  // Inside the guard the variate must equal tan(angle) exactly.
  EXPECT_EQ(cms_standard_variate(1.0 + 1e-12, 0.3, 0.7), std::tan(0.3));
  EXPECT_TRUE(std::isfinite(cms_standard_variate(0.05, 1.5707, 1e-300)));
}

// Property: the ECF of a seeded draw sits within 4/sqrt(n) of the exact CF
// for most seeds.
TEST(Sampler, EcfMatchesCf) {
  const std::size_t n = 100000;
  for (double a : {0.5, 1.0, 1.5, 2.0}) {
    const StableParams p(a);
    int good = 0;
    const int runs = 25;
    for (int run = 0; run < runs; ++run) {
      const Sample s = sample_symmetric_stable(p, n, derive_seed(1234, run));
      bool ok = true;
      for (double u : {0.25, 0.5, 1.0}) ok = ok && std::abs(ecf_eval(s, u) - exact_cf(p, u)) <= 4.0 / std::sqrt(n);
      good += ok;
    }
    EXPECT_GE(good, runs * 95 / 100) << "alpha=" << a;
  }
}

TEST(TailRatio, CauchyOracle) {
  const StableParams cauchy(1.0);
  const std::vector<double> t = {-1e4, -1e6};
  const auto v = tail_ratio_curve(cauchy, t, 1000000, 8);
  // F(t)|t| -> 1/pi; at t = -1e4 the exact value is 0.3183...
  const double exact = (0.5 + std::atan(-1e4) / std::numbers::pi) * 1e4;
  const double sigma = std::sqrt(exact / 1e4 * 1e4 * 1e4 / 1e6);
  EXPECT_NEAR(v[0], exact, 5.0 * sigma);
  EXPECT_LE(v[0], 0.5 + 5.0 * sigma);
  // At 1e6 only about one draw in a million is that far out; just check scale.
  EXPECT_LT(v[1], 5.0);
  EXPECT_TRUE(tail_ratio_curve(cauchy, {}, 100, 1).empty());
  EXPECT_EQ(code_of([] { tail_ratio_curve(StableParams(2.0), std::vector<double>{-1.0}, 10, 1); }), Errc::precondition);
}

TEST(SampleIo, RoundTripAndComments) {
  const Sample s = sample_symmetric_stable(StableParams(1.2, 0.5), 20, 4);
  std::stringstream io;
  write_sample(io, s);
  EXPECT_EQ(io.str().rfind("# stable alpha=1.2 gamma=0.5 delta=0 seed=4", 0), 0u);
  const Sample back = read_sample(io);
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(back.values()[i], s.values()[i]);

  std::istringstream bad("1.0\n# note\n\n2.0\nnope\n");
  EXPECT_EQ(code_of([&] { read_sample(bad); }), Errc::invalid_arguments);
  std::istringstream good("1.0\n# note\n\n 2.0 \n");
  EXPECT_EQ(read_sample(good).size(), 2u);
}

TEST(SampleStats, MadAndDegenerate) {
  const Sample s({1.0, 2.0, 3.0, 4.0, 100.0});
  EXPECT_DOUBLE_EQ(s.mad(), 1.0);
  EXPECT_TRUE(Sample({2.0, 2.0}).degenerate());
  EXPECT_FALSE(s.degenerate());
  EXPECT_EQ(code_of([] { Sample(std::vector<double>{}); }), Errc::invalid_arguments);
}
