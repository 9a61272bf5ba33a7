#include "symstable/stable_core.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "symstable/error.hpp"
#include "symstable/rng.hpp"
#include "symstable/text.hpp"

namespace symstable {

namespace {

// |alpha - 1| below this is sampled through the exact Cauchy transform.
constexpr double kCauchyGuard = 1e-9;

}  // namespace

StableParams::StableParams(double alpha, double gamma, double delta)
    : alpha_(alpha), gamma_(gamma), delta_(delta) {
  if (!(alpha > 0.0 && alpha <= 2.0)) fail(Errc::domain, "stability index alpha must lie in (0, 2]");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail(Errc::domain, "scale gamma must be positive and finite");
  if (!std::isfinite(delta)) fail(Errc::domain, "shift delta must be finite");
}

Sample::Sample(std::vector<double> values, std::optional<std::uint64_t> seed, std::optional<StableParams> origin)
    : values_(std::move(values)), seed_(seed), origin_(origin) {
  if (values_.empty()) fail(Errc::invalid_arguments, "a sample needs at least one value");
  for (double v : values_) {
    if (!std::isfinite(v)) fail(Errc::invalid_arguments, "sample values must be finite");
  }
}

double Sample::mad() const {
  std::vector<double> v(values_.begin(), values_.end());
  auto median_of = [](std::vector<double>& xs) {
    const std::size_t mid = xs.size() / 2;
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
    double m = xs[mid];
    if (xs.size() % 2 == 0) {
      m = 0.5 * (m + *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    return m;
  };
  const double median = median_of(v);
  for (double& x : v) x = std::abs(x - median);
  return median_of(v);
}

bool Sample::degenerate() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
}

double exact_r(const StableParams& params, double u) {
  require(u >= 0.0, "exact_r needs u >= 0");
  if (u == 0.0) return 0.0;
  return std::pow(params.gamma() * u, params.alpha());
}

std::complex<double> exact_cf(const StableParams& params, double u) {
  const double modulus = std::exp(-exact_r(params, std::abs(u)));
  const double phase = params.delta() * u;
  return {modulus * std::cos(phase), modulus * std::sin(phase)};
}

double cms_standard_variate(double alpha, double angle, double exponential) {
  if (std::abs(alpha - 1.0) < kCauchyGuard) return std::tan(angle);

  // Evaluated in logs: for small alpha the two power factors overflow
  // separately long before their product does.
  const double s = std::sin(alpha * angle);
  const double log_magnitude = std::log(std::abs(s)) - std::log(std::cos(angle)) / alpha +
                               (1.0 - alpha) / alpha * (std::log(std::cos((1.0 - alpha) * angle)) - std::log(exponential));
  constexpr double kLogMax = 709.782712893384;  // log(DBL_MAX)
  const double magnitude =
      log_magnitude >= kLogMax ? std::numeric_limits<double>::max() : std::exp(log_magnitude);
  return s < 0.0 ? -magnitude : magnitude;
}

Sample sample_symmetric_stable(const StableParams& params, std::size_t n, std::uint64_t seed) {
  require(n >= 1, "sample size must be positive");
  Rng rng(seed);
  std::vector<double> values(n);
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (double& x : values) {
    const double angle = rng.uniform(-half_pi, half_pi);
    const double w = rng.exponential();
    const double z = cms_standard_variate(params.alpha(), angle, w);
    x = params.gamma() * z + params.delta();
    if (!std::isfinite(x)) x = std::copysign(std::numeric_limits<double>::max(), z);
  }
  return Sample(std::move(values), seed, params);
}

std::vector<double> tail_ratio_curve(const StableParams& params, std::span<const double> t_grid,
                                     std::size_t mc_n, std::uint64_t seed) {
  require(params.alpha() < 2.0, "the power-law tail only exists for alpha < 2");
  for (double t : t_grid) require(t < 0.0, "tail_ratio_curve grid points must be negative");
  if (t_grid.empty()) return {};
  require(mc_n >= 1, "mc_n must be positive");

  Sample sample = sample_symmetric_stable(params, mc_n, seed);
  std::vector<double> sorted(sample.values().begin(), sample.values().end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    const double ecdf = static_cast<double>(below) / static_cast<double>(mc_n);
    out.push_back(ecdf * std::pow(std::abs(t) / params.gamma(), params.alpha()));
  }
  return out;
}

void write_sample(std::ostream& os, const Sample& sample) {
  if (sample.origin() && sample.seed()) {
    const StableParams& p = *sample.origin();
    os << "# stable alpha=" << format_double(p.alpha()) << " gamma=" << format_double(p.gamma())
       << " delta=" << format_double(p.delta()) << " seed=" << *sample.seed() << '\n';
  }
  for (double v : sample.values()) os << format_double(v) << '\n';
}

Sample read_sample(std::istream& is) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    double v = 0.0;
    if (!parse_double(std::string_view(line).substr(first), v) || !std::isfinite(v)) {
      fail(Errc::invalid_arguments, "line " + std::to_string(line_no) + ": not a finite decimal value");
    }
    values.push_back(v);
  }
  return Sample(std::move(values));
}

}  // namespace symstable
