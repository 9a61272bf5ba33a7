#include "symstable/lambert_w.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "symstable/error.hpp"

namespace symstable {

namespace {

constexpr double kBranchPoint = -0.36787944117144233;  // -1/e
constexpr int kMaxIterations = 64;

double initial_guess(double x) {
  if (x < -0.25) {
    // Puiseux series around the branch point in p = sqrt(2 (e x + 1)).
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  }
  if (x < 3.0) {
    if (std::abs(x) < 0.25) return x * (1.0 + x * (-1.0 + x * 1.5));
    return std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x) || x < kBranchPoint) fail(Errc::domain, "lambert_w0 is undefined below -1/e");
  if (x == 0.0) return 0.0;
  if (x == kBranchPoint) return -1.0;
  if (std::isinf(x)) return x;

  // Halley iteration on g(w) = w e^w - x.
  double w = initial_guess(x);
  for (int i = 0; i < kMaxIterations; ++i) {
    const double ew = std::exp(w);
    const double g = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double step = g / (ew * wp1 - (w + 2.0) * g / (2.0 * wp1));
    double next = w - step;
    if (next < -1.0) next = 0.5 * (w - 1.0);  // stay on the principal branch
    if (std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(next))) {
      return next;
    }
    w = next;
  }
  return w;
}

}  // namespace symstable
