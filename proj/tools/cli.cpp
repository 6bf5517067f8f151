#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bfi/case_studies.hpp"
#include "bfi/io.hpp"
#include "bfi/km.hpp"
#include "bfi/report.hpp"
#include "bfi/sim.hpp"

namespace bfi::cli {

namespace {

struct AnalysisFlags {
  std::string input;
  std::string unit = "months";
  double prior_shape = 0.5;
  double prior_rate = 0.5;
  std::optional<double> t0;
  double p0 = 0.7;
  std::string format = "json";
  std::string out;
};

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& f, bool need_input, bool need_t0) {
  if (need_input) cmd->add_option("input", f.input, "CSV file with header time,status")->required();
  cmd->add_option("--unit", f.unit, "time unit label")->capture_default_str();
  cmd->add_option("--prior-shape", f.prior_shape, "Gamma prior shape")->capture_default_str();
  cmd->add_option("--prior-rate", f.prior_rate, "Gamma prior rate")->capture_default_str();
  auto* t0 = cmd->add_option("--t0", f.t0, "median survival threshold (data time unit)");
  if (need_t0) t0->required();
  cmd->add_option("--p0", f.p0, "confidence level")->capture_default_str();
  cmd->add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  cmd->add_option("--out", f.out, "write output to this file instead of stdout");
}

AnalysisConfig config_from(const AnalysisFlags& f) {
  AnalysisConfig cfg;
  cfg.prior = GammaParams(f.prior_shape, f.prior_rate);
  cfg.t0 = f.t0.value_or(1.0);
  cfg.p0 = f.p0;
  cfg.validate();
  return cfg;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write '" + path + "'");
  file << text;
}

std::string render(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += (c == '\n') ? ' ' : c;
  }
  return out + "\"";
}

void error_line(std::ostream& err, std::string_view kind, std::string_view message,
                std::size_t row = 0, std::size_t column = 0) {
  err << "bfi: error kind=" << kind;
  if (row) err << " row=" << row;
  if (column) err << " column=" << column;
  err << " message=" << quoted(message) << '\n';
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("--grid: not a number: '" + s + "'");
  }
  return v;
}

// name=v1,v2,... or name=start:stop:step (inclusive).
void parse_grid_axis(const std::string& spec, SensitivityAxes& axes) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw InputError("--grid expects name=values, got '" + spec + "'");
  const auto name = spec.substr(0, eq);
  const auto body = spec.substr(eq + 1);

  std::vector<double> values;
  if (body.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(body);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(parse_number(item));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw InputError("--grid range must be start:stop:step with step > 0, got '" + body + "'");
    }
    const auto count = static_cast<long long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long long i = 0; i <= count; ++i) values.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  } else {
    std::stringstream ss(body);
    for (std::string item; std::getline(ss, item, ',');) values.push_back(parse_number(item));
  }
  if (values.empty()) throw InputError("--grid axis '" + name + "' has no values");

  if (name == "prior-shape") axes.prior_shape = values;
  else if (name == "prior-rate") axes.prior_rate = values;
  else if (name == "t0") axes.t0 = values;
  else if (name == "p0") axes.p0 = values;
  else throw InputError("--grid: unknown axis '" + name + "' (prior-shape, prior-rate, t0, p0)");
}

int run_report(const AnalysisFlags& f, bool with_km, std::ostream& out) {
  const auto bytes = read_file(f.input);
  const auto data = parse_csv(bytes, f.unit);
  const auto report = make_report(data, config_from(f), f.input, sha256_hex(bytes), with_km);
  emit(f.format == "json" ? render(to_json(report)) : to_text(report), f.out, out);
  return report.status == CellStatus::kNotApplicable ? kNotApplicable : kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian fragility index for single-arm time-to-event data", "bfi"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  AnalysisFlags analyze_flags;
  auto* analyze = app.add_subcommand("analyze", "posterior, fragility index and Kaplan-Meier summary");
  add_analysis_flags(analyze, analyze_flags, true, true);

  AnalysisFlags fi_flags;
  auto* fi = app.add_subcommand("fi", "fragility index report");
  add_analysis_flags(fi, fi_flags, true, true);

  std::string km_input, km_unit = "months", km_out, km_points;
  auto* km = app.add_subcommand("km", "Kaplan-Meier staircase as SVG");
  km->add_option("input", km_input, "CSV file with header time,status")->required();
  km->add_option("--unit", km_unit, "time unit label for the x axis")->capture_default_str();
  km->add_option("--out", km_out, "SVG output file (default stdout)");
  km->add_option("--points", km_points, "also write staircase and censor tick points as CSV");

  AnalysisFlags sens_flags;
  std::vector<std::string> grid_specs;
  unsigned sens_threads = 1;
  auto* sens = app.add_subcommand("sensitivity", "fragility index over a parameter grid");
  add_analysis_flags(sens, sens_flags, true, true);
  sens->add_option("--grid", grid_specs, "axis=v1,v2,... or axis=start:stop:step; axes: prior-shape, prior-rate, t0, p0")
      ->required();
  sens->add_option("--threads", sens_threads, "worker threads")->capture_default_str();

  AnalysisFlags sim_flags;
  std::size_t sim_n = 0;
  double sim_rate = 0.0;
  std::optional<double> sim_cutoff, sim_censor_rate;
  std::uint64_t sim_seed = 0;
  std::optional<std::size_t> sim_reps;
  unsigned sim_threads = 1;
  auto* sim = app.add_subcommand("simulate", "synthetic trial CSV, or FI histogram with --replications");
  sim->add_option("--n", sim_n, "subjects")->required()->check(CLI::PositiveNumber);
  sim->add_option("--rate", sim_rate, "true event rate")->required();
  auto* cutoff = sim->add_option("--cutoff", sim_cutoff, "administrative censoring time");
  auto* crate = sim->add_option("--censor-rate", sim_censor_rate, "exponential censoring rate");
  cutoff->excludes(crate);
  sim->add_option("--seed", sim_seed, "64-bit seed")->capture_default_str();
  sim->add_option("--replications", sim_reps, "run fragility_index on this many trials");
  sim->add_option("--threads", sim_threads, "worker threads")->capture_default_str();
  add_analysis_flags(sim, sim_flags, false, false);

  std::string repro_format = "json", repro_out;
  auto* repro = app.add_subcommand("reproduce-paper", "recompute the three published case studies");
  repro->add_option("--format", repro_format, "output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  repro->add_option("--out", repro_out, "write output to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_line(err, "usage", e.what());
    return kInputError;
  }

  try {
    if (*analyze) return run_report(analyze_flags, true, out);
    if (*fi) return run_report(fi_flags, false, out);

    if (*km) {
      const auto data = ingest_csv(km_input, km_unit);
      const auto curve = km_estimate(data);
      if (!km_points.empty()) emit(km_points_csv(curve), km_points, out);
      emit(km_svg(curve, data.time_unit()), km_out, out);
      return kOk;
    }

    if (*sens) {
      SensitivityAxes axes;
      for (const auto& g : grid_specs) parse_grid_axis(g, axes);
      const auto data = ingest_csv(sens_flags.input, sens_flags.unit);
      const auto grid = sensitivity_scan(data, config_from(sens_flags), axes, sens_threads);
      emit(sens_flags.format == "json" ? render(to_json(grid)) : to_text(grid), sens_flags.out, out);
      return kOk;
    }

    if (*sim) {
      SimSpec spec;
      spec.n = sim_n;
      spec.event_rate = sim_rate;
      spec.seed = sim_seed;
      if (sim_cutoff) spec.censoring = AdministrativeCensoring{*sim_cutoff};
      if (sim_censor_rate) spec.censoring = ExponentialCensoring{*sim_censor_rate};
      spec.validate();
      if (!sim_reps) {
        emit(write_csv(simulate_trial(spec)), sim_flags.out, out);
        return kOk;
      }
      if (!sim_flags.t0) throw InputError("--replications requires --t0");
      const auto config = config_from(sim_flags);
      const auto hist = fi_distribution(spec, config, *sim_reps, sim_threads);
      emit(render(to_json(hist, spec, config)), sim_flags.out, out);
      return kOk;
    }

    if (*repro) {
      std::vector<CaseReproduction> cases;
      for (const auto& study : published_case_studies()) cases.push_back(reproduce_case(study, AnalysisConfig{}));
      emit(repro_format == "json" ? render(to_json(cases)) : to_text(cases), repro_out, out);
      int code = kOk;
      for (const auto& c : cases) {
        if (!c.matches()) {
          error_line(err, "reproduction_mismatch",
                     c.study.name + ": computed FI " + fi_display(c.result) + ", published FI " +
                         std::to_string(c.study.reported_fi));
          code = kReproductionMismatch;
        }
      }
      return code;
    }
  } catch (const InputError& e) {
    error_line(err, "input", e.what(), e.row(), e.column());
    return kInputError;
  } catch (const DomainError& e) {
    error_line(err, "input", e.what());
    return kInputError;
  } catch (const ConvergenceError& e) {
    error_line(err, "numerical", e.what());
    return kNumericalFailure;
  } catch (const BracketError& e) {
    error_line(err, "numerical", e.what());
    return kNumericalFailure;
  }
  return kInputError;
}

}  // namespace bfi::cli
