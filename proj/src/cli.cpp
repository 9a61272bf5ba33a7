#include "symstable/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "symstable/bound_alt.hpp"
#include "symstable/bound_lemma.hpp"
#include "symstable/bounds.hpp"
#include "symstable/ecf.hpp"
#include "symstable/error.hpp"
#include "symstable/estimation.hpp"
#include "symstable/harness.hpp"
#include "symstable/stable_core.hpp"
#include "symstable/text.hpp"

namespace symstable::cli {

namespace {

using json = nlohmann::ordered_json;

struct Flags {
  std::optional<double> alpha;
  double gamma = 1.0;
  double delta = 0.0;
  std::optional<std::uint64_t> n;
  std::uint64_t seed = 1;
  double eps = 0.1;
  double p = 0.1;
  double L = 0.5;
  std::optional<double> alpha_min;
  std::optional<double> eps1;
  std::string construction = "lemma";
  std::optional<std::size_t> reps;
  std::optional<std::size_t> grid;
  std::string out;
  std::string format;
  std::string input;
  double r_under = 0.1;
  std::string mode;
  std::vector<std::string> figures;
};

// Flag registration, one helper per flag so each subcommand takes exactly
// the flags it understands.
void law_flags(CLI::App* s, Flags& f) {
  s->add_option("--alpha", f.alpha, "stability index in (0, 2]");
  s->add_option("--gamma", f.gamma, "scale > 0")->capture_default_str();
  s->add_option("--delta", f.delta, "shift")->capture_default_str();
}
void n_flag(CLI::App* s, Flags& f) { s->add_option("--n", f.n, "sample size")->check(CLI::PositiveNumber); }
void seed_flag(CLI::App* s, Flags& f) { s->add_option("--seed", f.seed, "64-bit seed")->capture_default_str(); }
void bound_flags(CLI::App* s, Flags& f) {
  s->add_option("--eps", f.eps, "preciseness epsilon")->capture_default_str();
  s->add_option("--p", f.p, "failure probability")->capture_default_str();
  s->add_option("--L", f.L, "tail constant")->capture_default_str();
  s->add_option("--alpha-min", f.alpha_min, "known lower bound on alpha");
  s->add_option("--construction", f.construction, "lemma or alt")
      ->check(CLI::IsMember({"lemma", "alt", "alternative"}))
      ->capture_default_str();
}
void io_flags(CLI::App* s, Flags& f) {
  s->add_option("--out", f.out, "write the payload here instead of stdout");
  s->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}
void input_flag(CLI::App* s, Flags& f) {
  s->add_option("--input", f.input, "data file: one value per line, # comments")->check(CLI::ExistingFile);
}

Construction construction_of(const Flags& f) { return *parse_construction(f.construction); }

StableParams law_of(const Flags& f) {
  if (!f.alpha) fail(Errc::invalid_arguments, "--alpha is required");
  return StableParams(*f.alpha, f.gamma, f.delta);
}

std::uint64_t need_n(const Flags& f) {
  if (!f.n) fail(Errc::invalid_arguments, "--n is required");
  return *f.n;
}

Sample read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(Errc::invalid_arguments, "cannot open " + path);
  return read_sample(is);
}

// --input wins; otherwise a seeded synthetic draw.
Sample data_of(const Flags& f) {
  if (!f.input.empty()) return read_file(f.input);
  return sample_symmetric_stable(law_of(f), static_cast<std::size_t>(need_n(f)), f.seed);
}

BoundConfig bound_config_of(const Flags& f, std::size_t default_grid) {
  BoundConfig b;
  b.epsilon = f.eps;
  b.p = f.p;
  b.n = need_n(f);
  b.L = f.L;
  b.alpha_min = f.alpha_min.value_or(0.0);
  b.alpha_grid_points = f.grid.value_or(default_grid);
  b.validate();
  return b;
}

json json_number_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string csv_row(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string head;
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    head += (i ? "," : "") + fields[i].first;
    row += (i ? "," : "") + fields[i].second;
  }
  return head + "\n" + row + "\n";
}

// ---- subcommands -------------------------------------------------------

std::string cmd_sample(const Flags& f) {
  const Sample s = sample_symmetric_stable(law_of(f), static_cast<std::size_t>(need_n(f)), f.seed);
  if (f.format == "json") {
    json j;
    j["alpha"] = s.origin()->alpha();
    j["gamma"] = s.origin()->gamma();
    j["delta"] = s.origin()->delta();
    j["seed"] = f.seed;
    j["values"] = std::vector<double>(s.values().begin(), s.values().end());
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  write_sample(os, s);
  return os.str();
}

std::string cmd_rhat(const Flags& f) {
  const Sample s = data_of(f);
  const ScanConfig scan = ScanConfig::for_sample(s);
  const std::size_t points = f.grid.value_or(100);
  require(points >= 1, "--grid must be positive");
  std::vector<double> us;
  std::vector<double> rh;
  std::vector<double> r;
  for (std::size_t i = 1; i <= points; ++i) {
    const double u = scan.u_max * static_cast<double>(i) / static_cast<double>(points);
    us.push_back(u);
    rh.push_back(r_hat(s, u));
    if (s.origin()) r.push_back(exact_r(*s.origin(), u));
  }
  if (f.format == "json") {
    json j;
    j["u"] = us;
    j["r_hat"] = json::array();
    for (double v : rh) j["r_hat"].push_back(std::isinf(v) ? json("inf") : json(v));
    if (!r.empty()) j["r"] = r;
    return j.dump(2) + "\n";
  }
  std::string out = r.empty() ? "u,r_hat\n" : "u,r_hat,r\n";
  for (std::size_t i = 0; i < us.size(); ++i) {
    out += format_double(us[i]) + "," + format_double(rh[i]);
    if (!r.empty()) out += "," + format_double(r[i]);
    out += "\n";
  }
  return out;
}

std::string cmd_bound(const Flags& f) {
  const BoundConfig b = bound_config_of(f, 400);
  const Construction c = construction_of(f);
  const BoundCurve curve = r_bar(c, b);
  if (curve.sample_too_small) {
    fail(Errc::sample_too_small, "n=" + std::to_string(b.n) + " is below the minimal sample size " +
                                     std::to_string(n_min(c, b.epsilon, b.p)));
  }
  if (f.format == "json") {
    json j;
    j["construction"] = std::string(construction_name(c));
    j["epsilon"] = b.epsilon;
    j["p"] = b.p;
    j["n"] = b.n;
    j["L"] = b.L;
    j["alpha_min"] = b.alpha_min;
    j["r_bar"] = curve.r_bar;
    j["grid_spacing"] = curve.grid_spacing;
    j["limit_entry"] = json_number_or_null(curve.limit_entry);
    j["closed_form_r_bar"] = json_number_or_null(curve.closed_form_r_bar);
    j["alpha"] = curve.alphas;
    j["r_n"] = curve.r_values;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  write_bound_csv(os, curve, b);
  return os.str();
}

std::string cmd_n_min(const Flags& f) {
  const Construction c = construction_of(f);
  const std::uint64_t n = n_min(c, f.eps, f.p);
  if (f.format == "json") {
    json j;
    j["construction"] = std::string(construction_name(c));
    j["epsilon"] = f.eps;
    j["p"] = f.p;
    j["n_min"] = n;
    return j.dump(2) + "\n";
  }
  return std::to_string(n) + "\n";
}

std::string cmd_compare(const Flags& f) {
  const BoundConfig b = bound_config_of(f, 400);
  const BoundCurve lemma = r_bar_lemma(b);
  const BoundCurve alt = r_bar_alt(b);
  std::string out = "alpha,lemma,alternative\n";
  if (lemma.limit_entry) out += "0," + format_double(*lemma.limit_entry) + "," + format_double(*alt.limit_entry) + "\n";
  for (std::size_t i = 0; i < lemma.alphas.size(); ++i) {
    out += format_double(lemma.alphas[i]) + "," + format_double(lemma.r_values[i]) + "," +
           format_double(alt.r_values[i]) + "\n";
  }
  out += "inf," + format_double(lemma.r_bar) + "," + format_double(alt.r_bar) + "\n";
  return out;
}

std::string estimate_payload(const EstimateResult& r, const std::string& format) {
  if (format == "json") return to_json(r) + "\n";
  return csv_row({{"alpha_hat", format_double(r.alpha_hat)},
                  {"u1", format_double(r.u1)},
                  {"u2", format_double(r.u2)},
                  {"r_bar", format_double(r.r_bar)},
                  {"r_under", format_double(r.r_under)},
                  {"epsilon", format_double(r.epsilon)},
                  {"epsilon1", format_double(r.epsilon1)},
                  {"ci_lo", format_double(r.ci_lo)},
                  {"ci_hi", format_double(r.ci_hi)},
                  {"n", std::to_string(r.n)},
                  {"construction", std::string(construction_name(r.construction))}});
}

std::string cmd_estimate(const Flags& f) {
  if (f.mode == "levels") {
    // Bypass: fixed levels r_bar - eps = 0.5 and r_under + eps = 0.1.
    const Sample s = data_of(f);
    EstimateResult r = alpha_hat_levels(s, 0.5, 0.1, 0.0);
    r.ci_lo = r.ci_hi = std::clamp(r.alpha_hat, 0.0, 2.0);
    return estimate_payload(r, f.format);
  }

  EstimationConfig ctx;
  ctx.p = f.p;
  ctx.alpha_min = f.alpha_min.value_or(0.5);
  ctx.construction = construction_of(f);
  ctx.L = f.L;
  if (f.grid) ctx.alpha_grid_points = *f.grid;
  if (f.mode == "q1") {
    if (!f.eps1) fail(Errc::invalid_arguments, "estimate q1 needs --eps1");
    ctx.epsilon1 = f.eps1;
  } else {
    ctx.n = need_n(f);
  }

  std::unique_ptr<DataSource> source;
  if (!f.input.empty()) {
    source = std::make_unique<SampleSource>(read_file(f.input));
  } else if (f.alpha) {
    source = std::make_unique<SyntheticSource>(law_of(f), f.seed);
  } else {
    fail(Errc::invalid_arguments, "estimate needs --input or --alpha");
  }
  const EstimateResult r = f.mode == "q1" ? procedure1(ctx, *source) : procedure2(ctx, *source);
  return estimate_payload(r, f.format);
}

std::string report_payload(const CoverageReport& r, const std::string& format) {
  if (format == "json") return to_json(r) + "\n";
  return csv_row({{"replications", std::to_string(r.replications)},
                  {"violations", std::to_string(r.violations)},
                  {"empirical_rate", format_double(r.empirical_rate)},
                  {"bound_p", format_double(r.bound_p)},
                  {"threshold", format_double(r.threshold)},
                  {"pass", r.pass ? "true" : "false"},
                  {"in_contract", r.in_contract ? "true" : "false"}});
}

std::string cmd_coverage(const Flags& f) {
  const StableParams law = law_of(f);
  const Construction c = construction_of(f);
  const std::size_t grid = f.grid.value_or(2048);
  if (f.mode == "thm1") {
    BoundConfig b;
    b.epsilon = f.eps;
    b.p = f.p;
    b.n = f.n.value_or(2 * n_min(c, f.eps, f.p));
    b.L = f.L;
    b.alpha_min = f.alpha_min.value_or(0.0);
    return report_payload(coverage_theorem1(law, b, c, f.reps.value_or(500), f.seed, grid), f.format);
  }
  if (f.mode == "thm2") {
    LogBoundScenario sc;
    sc.epsilon = f.eps;
    sc.p = f.p;
    sc.alpha_min = f.alpha_min.value_or(0.5);
    sc.r_under = f.r_under;
    sc.n = need_n(f);
    sc.construction = c;
    sc.L = f.L;
    return report_payload(coverage_theorem2(law, sc, f.reps.value_or(300), f.seed, grid), f.format);
  }
  EstimationConfig ctx;
  ctx.p = f.p;
  ctx.alpha_min = f.alpha_min.value_or(0.5);
  ctx.n = need_n(f);
  ctx.construction = c;
  ctx.L = f.L;
  return report_payload(coverage_tapsus(law, ctx, f.reps.value_or(300), f.seed), f.format);
}

std::string cmd_figures(const Flags& f) {
  FigureConfig cfg;
  if (f.n) cfg.n = static_cast<std::size_t>(*f.n);
  if (f.grid) cfg.alpha_grid_points = *f.grid;
  cfg.epsilon = f.eps;
  cfg.p = f.p;
  cfg.L = f.L;
  const std::filesystem::path dir = f.out.empty() ? "." : f.out;
  std::filesystem::create_directories(dir);
  std::string listing;
  for (const std::string& name : f.figures) {
    for (const FigureTable& t : figure_data(name.back() - '0', cfg, f.seed)) {
      const auto path = dir / (t.name + ".csv");
      std::ofstream os(path);
      if (!os) fail(Errc::invalid_arguments, "cannot write " + path.string());
      write_csv(os, t);
      listing += path.string() + "\n";
    }
  }
  return listing;
}

void emit(const std::string& payload, const Flags& f, std::ostream& out) {
  if (f.out.empty()) {
    out << payload;
    return;
  }
  std::ofstream os(f.out, std::ios::binary);
  if (!os) fail(Errc::invalid_arguments, "cannot write " + f.out);
  os << payload;
}

void error_json(std::ostream& err, std::string_view name, const std::string& message) {
  json j;
  j["error"] = std::string(name);
  j["message"] = message;
  err << j.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Finite-sample estimation of the stability index of symmetric stable laws", "symstable"};
  app.require_subcommand(1);

  auto* sample = app.add_subcommand("sample", "draw a seeded symmetric stable sample");
  law_flags(sample, f);
  n_flag(sample, f);
  seed_flag(sample, f);
  io_flags(sample, f);

  auto* rhat = app.add_subcommand("rhat", "evaluate r-hat on a u grid");
  law_flags(rhat, f);
  n_flag(rhat, f);
  seed_flag(rhat, f);
  input_flag(rhat, f);
  rhat->add_option("--grid", f.grid, "number of u points");
  io_flags(rhat, f);

  auto* bound = app.add_subcommand("bound", "r_n over the alpha grid and r_bar");
  bound_flags(bound, f);
  n_flag(bound, f);
  bound->add_option("--grid", f.grid, "alpha grid points");
  io_flags(bound, f);

  auto* nmin = app.add_subcommand("n-min", "minimal sample size of a construction");
  bound_flags(nmin, f);
  io_flags(nmin, f);

  auto* compare = app.add_subcommand("compare", "both constructions side by side");
  bound_flags(compare, f);
  n_flag(compare, f);
  compare->add_option("--grid", f.grid, "alpha grid points");
  io_flags(compare, f);

  auto* estimate = app.add_subcommand("estimate", "point estimate and confidence interval");
  estimate->add_option("mode", f.mode, "q1, q2 or levels")->required()->check(CLI::IsMember({"q1", "q2", "levels"}));
  law_flags(estimate, f);
  n_flag(estimate, f);
  seed_flag(estimate, f);
  bound_flags(estimate, f);
  estimate->add_option("--eps1", f.eps1, "target precision (q1)");
  estimate->add_option("--grid", f.grid, "alpha grid points inside each r_bar");
  input_flag(estimate, f);
  io_flags(estimate, f);

  auto* coverage = app.add_subcommand("coverage", "Monte Carlo coverage experiment");
  coverage->add_option("mode", f.mode, "thm1, thm2 or tapsus")
      ->required()
      ->check(CLI::IsMember({"thm1", "thm2", "tapsus"}));
  law_flags(coverage, f);
  n_flag(coverage, f);
  seed_flag(coverage, f);
  bound_flags(coverage, f);
  coverage->add_option("--r-under", f.r_under, "lower end of the r range (thm2)")->capture_default_str();
  coverage->add_option("--reps", f.reps, "replications (>= 30)");
  coverage->add_option("--grid", f.grid, "u grid points per replication");
  io_flags(coverage, f);

  auto* figures = app.add_subcommand("figures", "write figure data as fig<k><panel>.csv");
  figures->add_option("which", f.figures, "fig1 .. fig5")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5"}));
  n_flag(figures, f);
  seed_flag(figures, f);
  figures->add_option("--eps", f.eps, "preciseness epsilon (fig4, fig5)")->capture_default_str();
  figures->add_option("--p", f.p, "failure probability (fig4, fig5)")->capture_default_str();
  figures->add_option("--L", f.L, "tail constant (fig4, fig5)")->capture_default_str();
  figures->add_option("--grid", f.grid, "alpha grid points (fig4, fig5)");
  figures->add_option("--out", f.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    error_json(err, "InvalidArguments", e.what());
    return 1;
  }

  if (f.format.empty()) f.format = *estimate || *coverage ? "json" : "csv";

  try {
    std::string payload;
    if (*figures) {
      out << cmd_figures(f);
      return 0;
    }
    if (*sample) payload = cmd_sample(f);
    if (*rhat) payload = cmd_rhat(f);
    if (*bound) payload = cmd_bound(f);
    if (*nmin) payload = cmd_n_min(f);
    if (*compare) payload = cmd_compare(f);
    if (*estimate) payload = cmd_estimate(f);
    if (*coverage) payload = cmd_coverage(f);
    emit(payload, f, out);
    return 0;
  } catch (const Error& e) {
    error_json(err, errc_name(e.code()), e.what());
    return is_infeasibility(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    error_json(err, "InternalError", e.what());
    return 1;
  }
}

int run(int argc, char** argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace symstable::cli
