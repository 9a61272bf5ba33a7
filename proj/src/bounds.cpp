#include "symstable/bounds.hpp"

#include <cmath>
#include <ostream>

#include "symstable/bound_alt.hpp"
#include "symstable/bound_lemma.hpp"
#include "symstable/error.hpp"
#include "symstable/text.hpp"

namespace symstable {

std::string_view construction_name(Construction c) noexcept {
  return c == Construction::lemma ? "lemma" : "alternative";
}

std::optional<Construction> parse_construction(std::string_view text) noexcept {
  if (text == "lemma") return Construction::lemma;
  if (text == "alt" || text == "alternative") return Construction::alternative;
  return std::nullopt;
}

void BoundConfig::validate() const {
  require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive");
  require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  require(n >= 1, "n must be at least 1");
  require(L > 0.0 && std::isfinite(L), "L must be positive");
  require(alpha_min >= 0.0 && alpha_min < alpha_max, "alpha_min must lie in [0, 2)");
  require(alpha_grid_points >= 2, "the alpha grid needs at least two points");
  require(r_tol > 0.0, "r_tol must be positive");
  require(x_tol_rel > 0.0, "x_tol_rel must be positive");
}

std::vector<double> alpha_grid(double alpha_min, std::size_t points) {
  require(points >= 2, "the alpha grid needs at least two points");
  require(alpha_min >= 0.0 && alpha_min < 2.0, "alpha_min must lie in [0, 2)");
  const double lo = alpha_min > 0.0 ? alpha_min : 1e-2;
  std::vector<double> grid;
  grid.reserve(points);
  if (lo >= 1.0) {
    for (std::size_t i = 0; i < points; ++i) {
      grid.push_back(lo + (2.0 - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
  } else {
    // Geometric on [lo, 1), where r_n(alpha) moves fastest, then linear on [1, 2].
    const std::size_t geo = points / 2;
    const std::size_t lin = points - geo;
    const double ratio = std::log(1.0 / lo);
    for (std::size_t i = 0; i < geo; ++i) {
      grid.push_back(lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(geo)));
    }
    for (std::size_t i = 0; i < lin; ++i) {
      grid.push_back(lin == 1 ? 2.0 : 1.0 + static_cast<double>(i) / static_cast<double>(lin - 1));
    }
  }
  grid.front() = lo;
  grid.back() = 2.0;
  return grid;
}

void write_bound_csv(std::ostream& os, const BoundCurve& curve, const BoundConfig& config) {
  os << "# construction=" << construction_name(curve.construction) << " epsilon=" << format_double(config.epsilon)
     << " p=" << format_double(config.p) << " n=" << config.n << " L=" << format_double(config.L)
     << " alpha_min=" << format_double(config.alpha_min) << " grid_points=" << config.alpha_grid_points
     << " grid_spacing=" << format_double(curve.grid_spacing)
     << " sample_too_small=" << (curve.sample_too_small ? "true" : "false");
  if (curve.closed_form_r_bar) os << " closed_form_r_bar=" << format_double(*curve.closed_form_r_bar);
  os << '\n';
  os << "alpha,r_n\n";
  if (curve.limit_entry) os << "0," << format_double(*curve.limit_entry) << '\n';
  for (std::size_t i = 0; i < curve.alphas.size(); ++i) {
    os << format_double(curve.alphas[i]) << ',' << format_double(curve.r_values[i]) << '\n';
  }
  os << "inf," << format_double(curve.r_bar) << '\n';
}

std::uint64_t n_min(Construction c, double epsilon, double p) {
  return c == Construction::lemma ? n_min_lemma(epsilon, p) : n_o_alt(epsilon, p);
}

BoundCurve r_bar(Construction c, const BoundConfig& config) {
  return c == Construction::lemma ? r_bar_lemma(config) : r_bar_alt(config);
}

double r_bar_value(Construction c, const BoundConfig& config) { return r_bar(c, config).r_bar; }

}  // namespace symstable
