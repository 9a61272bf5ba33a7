#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace symstable {

/// Which large-deviation construction backs r-bar.
enum class Construction { lemma, alternative };

std::string_view construction_name(Construction c) noexcept;
/// Accepts "lemma", "alt" and "alternative".
std::optional<Construction> parse_construction(std::string_view text) noexcept;

/// Inputs shared by both constructions.
struct BoundConfig {
  double epsilon = 0.1;  // preciseness of r-hat around r
  double p = 0.1;        // failure probability
  std::uint64_t n = 1000;
  double L = 0.5;  // tail constant: F(t) <= L (|t|/gamma)^-alpha
  /// Known lower bound on alpha; 0 is the universal case and adds the
  /// alpha -> 0 limit entry to the curve.
  double alpha_min = 0.0;
  std::size_t alpha_grid_points = 400;
  double r_tol = 1e-10;
  /// Relative to epsilon e^-r; the absolute tolerance for x' bisection.
  double x_tol_rel = 1e-12;

  static constexpr double alpha_max = 2.0;

  /// Throws Errc::precondition on any violated invariant.
  void validate() const;
};

/// Grid over [lo, 2] with lo = alpha_min (or 1e-2 when alpha_min = 0):
/// geometric below 1, linear above, both ends included.
std::vector<double> alpha_grid(double alpha_min, std::size_t points);

struct BoundCurve {
  Construction construction = Construction::lemma;
  std::vector<double> alphas;
  std::vector<double> r_values;
  /// r_n in the alpha -> 0 limit; present iff alpha_min = 0.
  std::optional<double> limit_entry;
  double r_bar = 0.0;
  /// Largest gap between neighbouring grid points.
  double grid_spacing = 0.0;
  /// n is at or below the construction's minimal sample size.
  bool sample_too_small = false;

  // Closed-form cross-check (alternative construction only).
  std::optional<double> kappa;
  std::optional<double> alpha2;
  std::optional<double> closed_form_r_bar;
  bool cross_check_applicable = false;
};

/// `# <config>` comment, `alpha,r_n` header, one row per grid point (the
/// limit entry as alpha = 0 first), and a closing `inf,<r_bar>` row.
void write_bound_csv(std::ostream& os, const BoundCurve& curve, const BoundConfig& config);

/// Minimal sample size of the chosen construction (strict lower bound on n).
std::uint64_t n_min(Construction c, double epsilon, double p);

/// r-bar of the chosen construction.
BoundCurve r_bar(Construction c, const BoundConfig& config);

/// Just the r_bar number.
double r_bar_value(Construction c, const BoundConfig& config);

}  // namespace symstable
