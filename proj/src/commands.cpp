#include "amc/commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "amc/csv.hpp"
#include "amc/errors.hpp"
#include "amc/repro.hpp"
#include "amc/rng.hpp"
#include "amc/svg.hpp"

#ifndef AMC_VERSION
#define AMC_VERSION "0.0.0"
#endif

namespace amc {

namespace {

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error("UsageError", what) {}
};

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::uint64_t parse_count(const std::string& text, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(v >= 0.0) ||
      v != std::floor(v) || v > 9.0e18) {
    throw UsageError(std::string(what) + " must be a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("seed must be an unsigned 64-bit integer, got '" + text + "'");
  }
  return v;
}

RunConfig config_from(const std::string& path) {
  return path.empty() ? [] {
    RunConfig c;
    c.validate();
    return c;
  }()
                      : load_config(path);
}

// Writes to `path`, or to `fallback` when the path is empty.
template <typename Writer>
void emit(const std::string& path, std::ostream& fallback, Writer&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + path + "'");
  write(file);
  if (!file) throw ConfigError("write failed for '" + path + "'");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + path + "'");
  file << text;
}

RunConfig point(ScenarioKind kind, double value, Architecture arch, double n0_ratio = 50.0) {
  RunConfig c;
  c.scenario.kind = kind;
  c.scenario.grid = {value};
  c.scenario.architectures = {arch};
  c.setup.channel.n0 = c.setup.channel.n1 / n0_ratio;
  c.setup.isi_oracle_modes = {OracleMode::Genie};
  return c;
}

struct SweepArgs {
  std::string config;
  std::string scenario;
  std::string grid;
  std::string trials;
  std::string seed;
  unsigned threads = 0;
  std::string out;
  std::string svg;
};

struct ValidateArgs {
  std::string trials = "1e6";
  std::string seed = "42";
  unsigned threads = 0;
  std::string out;
};

struct CurveArgs {
  std::string config;
  std::optional<double> kd;
  std::optional<double> kd_new;
  std::optional<double> at;
  double decades = 4.0;
  int half_points = 40;
  std::string out;
  std::string svg;
};

struct RecipeArgs {
  bool run = false;
  std::string trials;
};

int cmd_defaults(const std::string& path, std::ostream& out) {
  out << format_config(config_from(path));
  return kExitOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg = config_from(a.config);
  if (!a.scenario.empty()) {
    const auto kind = parse_scenario_kind(a.scenario);
    if (!kind) throw UsageError("unknown scenario '" + a.scenario + "'");
    if (*kind != cfg.scenario.kind) cfg.scenario.grid.clear();
    cfg.scenario.kind = *kind;
  }
  if (!a.grid.empty()) cfg.scenario.grid = parse_grid(a.grid);
  if (!a.trials.empty()) cfg.setup.oracle.trials = parse_count(a.trials, "trials");
  if (!a.seed.empty()) cfg.setup.oracle.seed = parse_seed(a.seed);
  if (a.threads != 0) cfg.setup.oracle.threads = a.threads;
  if (!a.out.empty()) cfg.output.csv_path = a.out;
  if (!a.svg.empty()) cfg.output.svg_path = a.svg;
  cfg.validate();

  const auto rows = run_sweep(cfg.scenario, cfg.setup);
  const CsvMeta meta{config_hash(cfg), cfg.setup.oracle.seed};
  emit(cfg.output.csv_path, out,
       [&](std::ostream& o) { write_sweep_csv(o, rows, meta, cfg.output.precision); });
  if (!cfg.output.svg_path.empty()) write_text(cfg.output.svg_path, render_sweep_plot(rows));
  err << "sweep " << to_string(cfg.scenario.kind) << ": " << rows.size() << " rows\n";
  return kExitOk;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  const auto trials = parse_count(a.trials, "trials");
  if (trials == 0) throw UsageError("trials must be > 0");
  const auto seed = parse_seed(a.seed);
  const auto outcomes = run_validation(trials, seed, a.threads);

  std::vector<SweepRow> rows;
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const auto& p : validation_matrix()) {
    hash = (hash ^ config_hash(p.config)) * 0x100000001b3ULL;
  }
  bool all = true;
  for (const auto& o : outcomes) {
    rows.push_back(o.row);
    all = all && o.agrees;
    err << (o.agrees ? "ok   " : "FAIL ") << o.label << " analytic=" << format_number(o.row.bep_analytic, 6)
        << " mc=" << format_number(o.row.oracle->bep, 6) << " z=" << format_number(o.z, 3) << '\n';
  }
  emit(a.out, out, [&](std::ostream& o) { write_sweep_csv(o, rows, CsvMeta{hash, seed}); });
  if (!all) {
    err << "amc: error kind=ValidationFailure message=\"analytic and oracle disagree beyond 4 SE\"\n";
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_response_curve(const CurveArgs& a, std::ostream& out) {
  RunConfig cfg = config_from(a.config);
  if (a.half_points < 1) throw UsageError("points-per-side must be >= 1");
  if (!(a.decades > 0.0)) throw UsageError("decades must be > 0");

  struct Curve {
    std::string arch;
    double kd;
    std::optional<double> kd_new;
    Receptors receptors;
  };
  std::vector<Curve> curves;
  const int n_r = cfg.setup.receptor_count;
  if (a.kd) {
    if (a.kd_new) {
      curves.push_back({"mixture", *a.kd, a.kd_new,
                        MixtureConfig{*a.kd_new, *a.kd, cfg.setup.alpha, n_r}});
    } else {
      curves.push_back({"single", *a.kd, std::nullopt, ReceptorConfig{*a.kd, n_r}});
    }
  } else if (a.at) {
    ScenarioSpec spec = cfg.scenario;
    spec.grid = {*a.at};
    if (spec.kind == ScenarioKind::Interference || spec.kind == ScenarioKind::IsiTs ||
        spec.kind == ScenarioKind::IsiMemory) {
      spec.knowledge = {Knowledge::FullStats};
    }
    ModelSetup setup = cfg.setup;
    setup.oracle.trials = 0;
    for (const auto& row : run_sweep(spec, setup)) {
      Receptors r = row.kd_new ? Receptors{MixtureConfig{*row.kd_new, row.kd, setup.alpha, n_r}}
                               : Receptors{ReceptorConfig{row.kd, n_r}};
      curves.push_back({std::string(to_string(row.arch)), row.kd, row.kd_new, r});
    }
  } else {
    const double k = baseline(cfg.setup.channel).kd;
    curves.push_back({"NAR", k, std::nullopt, ReceptorConfig{k, n_r}});
  }
  for (const auto& c : curves) validate(c.receptors);

  std::vector<ResponseCurve> tables;
  std::vector<Series> series;
  for (const auto& c : curves) {
    const double centre = c.kd_new ? std::sqrt(c.kd * *c.kd_new) : c.kd;
    const auto grid = centred_log_grid(centre, a.decades, a.half_points);
    tables.push_back(export_response_curve(c.receptors, grid));
    series.push_back({c.arch, tables.back().concentration, tables.back().occupancy});
  }
  const CsvMeta meta{config_hash(cfg), cfg.setup.oracle.seed};
  const int prec = cfg.output.precision;
  emit(a.out, out, [&](std::ostream& o) {
    o << metadata_line(meta) << '\n';
    for (std::size_t i = 0; i < curves.size(); ++i) {
      o << "# dynamic_range arch=" << curves[i].arch
        << " c10=" << format_number(tables[i].c10, prec)
        << " c90=" << format_number(tables[i].c90, prec) << '\n';
    }
    o << "arch,KD,KD_new,c,p_B\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const auto& c = curves[i];
      for (std::size_t j = 0; j < tables[i].concentration.size(); ++j) {
        o << c.arch << ',' << format_number(c.kd, prec) << ','
          << (c.kd_new ? format_number(*c.kd_new, prec) : std::string()) << ','
          << format_number(tables[i].concentration[j], prec) << ','
          << format_number(tables[i].occupancy[j], prec) << '\n';
      }
    }
  });
  if (!a.svg.empty()) {
    PlotOptions opt{"response curve", "concentration (molecules/um^3)", "p_B", true, false};
    write_text(a.svg, render_line_plot(series, opt));
  }
  return kExitOk;
}

int cmd_recipes(const RecipeArgs& a, std::ostream& out) {
  std::optional<std::uint64_t> trials;
  if (!a.trials.empty()) trials = parse_count(a.trials, "trials");
  bool all = true;
  for (const auto& recipe : list_recipes()) {
    out << "figure " << recipe.figure << "  " << recipe.id << "  " << recipe.config_file << "  "
        << recipe.title << '\n';
    if (!a.run) continue;
    const auto report = run_recipe(recipe, trials);
    for (const auto& c : report.checks) {
      out << "    " << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    }
    all = all && report.passed();
  }
  return all ? kExitOk : kExitValidation;
}

int exit_code_for(const Error& e) {
  const auto kind = e.kind();
  if (kind == "ValidationError") return kExitValidation;
  if (kind == "NonConvergence" || kind == "DomainError" || kind == "InvalidBracket" ||
      kind == "DegenerateStats" || kind == "LengthMismatch") {
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace

std::vector<ValidationPoint> validation_matrix() {
  using A = Architecture;
  using S = ScenarioKind;
  std::vector<ValidationPoint> m;
  m.push_back({"scaling gamma=0.1 N1/N0=1.5 NAR", point(S::Scaling, 0.1, A::Nar, 1.5)});
  m.push_back({"scaling gamma=10 N1/N0=1.5 RTAR", point(S::Scaling, 10.0, A::Rtar, 1.5)});
  m.push_back({"shift 10K* NAR", point(S::Shift, 10.0, A::Nar)});
  m.push_back({"shift 20K* RTAR", point(S::Shift, 20.0, A::Rtar)});
  m.push_back({"shift 20K* REAR", point(S::Shift, 20.0, A::Rear)});
  m.push_back({"enzyme beta=0.55 N1/N0=1.5 NAR", point(S::Enzyme, 0.55, A::Nar, 1.5)});
  m.push_back({"enzyme beta=0.55 N1/N0=1.5 REAR", point(S::Enzyme, 0.55, A::Rear, 1.5)});
  for (const auto arch : {A::Nar, A::Rtar, A::Rear}) {
    auto c = point(S::IsiTs, 2.0, arch);
    c.setup.channel.memory_length = 10;
    m.push_back({"isi Ts=2 I=10 M=2 " + std::string(to_string(arch)), c});
  }
  auto fm = point(S::Interference, 20.0, A::Rtar);
  fm.scenario.knowledge = {Knowledge::FirstMoment};
  m.push_back({"interference 20K* first-moment RTAR", fm});
  auto fs = point(S::Interference, 20.0, A::Rear);
  fs.scenario.knowledge = {Knowledge::FullStats};
  m.push_back({"interference 20K* full-stats REAR", fs});
  for (auto& p : m) p.config.validate();
  return m;
}

std::vector<ValidationOutcome> run_validation(std::uint64_t trials, std::uint64_t seed,
                                              unsigned threads) {
  std::vector<ValidationOutcome> out;
  const auto matrix = validation_matrix();
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    ModelSetup setup = matrix[i].config.setup;
    setup.oracle.trials = trials;
    setup.oracle.seed = split_seed(seed, i);
    setup.oracle.threads = threads;
    const auto rows = run_sweep(matrix[i].config.scenario, setup);
    ValidationOutcome o;
    o.label = matrix[i].label;
    o.row = rows.front();
    const auto& est = *o.row.oracle;
    o.z = (o.row.bep_analytic - est.bep) / est.std_error;
    o.agrees = std::abs(o.z) <= 4.0;
    out.push_back(std::move(o));
  }
  return out;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive molecular-communication receiver models", "amc"};
  app.set_version_flag("--version", AMC_VERSION);
  app.require_subcommand(1);

  std::string defaults_config;
  auto* defaults = app.add_subcommand("defaults", "Print the effective configuration");
  defaults->add_option("-c,--config", defaults_config, "Config file");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run a scenario sweep and write CSV");
  sweep->add_option("-c,--config", sweep_args.config, "Config file");
  sweep->add_option("-s,--scenario", sweep_args.scenario,
                    "scaling|shift|enzyme|isi-ts|isi-memory|interference|ratio");
  sweep->add_option("-g,--grid", sweep_args.grid, "Grid: list, log:lo:hi:n or lin:lo:hi:n");
  sweep->add_option("-n,--trials", sweep_args.trials, "Oracle trials per row (0 disables)");
  sweep->add_option("--seed", sweep_args.seed, "Oracle seed");
  sweep->add_option("-j,--threads", sweep_args.threads, "Oracle threads (0 = all cores)");
  sweep->add_option("-o,--out", sweep_args.out, "CSV path (default stdout)");
  sweep->add_option("--svg", sweep_args.svg, "Optional SVG plot path");

  ValidateArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Compare analytic BEP with the oracle");
  validate_cmd->add_option("-n,--trials", validate_args.trials, "Trials per point")
      ->capture_default_str();
  validate_cmd->add_option("--seed", validate_args.seed, "Seed")->capture_default_str();
  validate_cmd->add_option("-j,--threads", validate_args.threads, "Threads (0 = all cores)");
  validate_cmd->add_option("-o,--out", validate_args.out, "CSV path (default stdout)");

  CurveArgs curve_args;
  auto* curve = app.add_subcommand("response-curve", "Write occupancy against concentration");
  curve->add_option("-c,--config", curve_args.config, "Config file");
  curve->add_option("--kd", curve_args.kd, "Single-population K_D (base K_D with --kd-new)");
  curve->add_option("--kd-new", curve_args.kd_new, "K_D of the expressed population");
  curve->add_option("--at", curve_args.at, "Scenario parameter whose tuned receivers to plot");
  curve->add_option("--decades", curve_args.decades, "Half-width of the grid in decades")
      ->capture_default_str();
  curve->add_option("--points-per-side", curve_args.half_points, "Grid points per side")
      ->capture_default_str();
  curve->add_option("-o,--out", curve_args.out, "CSV path (default stdout)");
  curve->add_option("--svg", curve_args.svg, "Optional SVG plot path");

  RecipeArgs recipe_args;
  auto* recipes = app.add_subcommand("recipes", "List figure recipes, optionally running them");
  recipes->add_flag("--run", recipe_args.run, "Run every recipe and its checks");
  recipes->add_option("-n,--trials", recipe_args.trials, "Override oracle trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "amc: error kind=UsageError message=" << quoted(e.what()) << '\n';
    return kExitUsage;
  }

  try {
    if (*defaults) return cmd_defaults(defaults_config, out);
    if (*sweep) return cmd_sweep(sweep_args, out, err);
    if (*validate_cmd) return cmd_validate(validate_args, out, err);
    if (*curve) return cmd_response_curve(curve_args, out);
    if (*recipes) return cmd_recipes(recipe_args, out);
  } catch (const ParseError& e) {
    err << "amc: error kind=ParseError line=" << e.line() << " key=" << quoted(e.key())
        << " message=" << quoted(e.what()) << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "amc: error kind=" << e.kind() << " message=" << quoted(e.what()) << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "amc: error kind=Internal message=" << quoted(e.what()) << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace amc
