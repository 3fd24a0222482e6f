#include "amc/repro.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <utility>

#include "amc/csv.hpp"
#include "amc/errors.hpp"

#ifndef AMC_RECIPE_DIR
#define AMC_RECIPE_DIR "recipes"
#endif

namespace amc {

namespace {

std::string num(double v) { return format_number(v, 6); }

CheckResult result(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok, std::move(detail)};
}

std::optional<double> find_bep(const std::vector<SweepRow>& rows, double param, Architecture arch,
                               const std::string& knowledge = {}) {
  for (const auto& r : rows) {
    if (r.param_value == param && r.arch == arch && r.knowledge == knowledge) {
      return r.bep_analytic;
    }
  }
  return std::nullopt;
}

// (param, bep) series for one architecture and knowledge label, in grid order.
std::vector<std::pair<double, double>> series(const std::vector<SweepRow>& rows,
                                              Architecture arch,
                                              const std::string& knowledge = {}) {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : rows) {
    if (r.arch == arch && r.knowledge == knowledge) out.emplace_back(r.param_value, r.bep_analytic);
  }
  return out;
}

CheckResult oracle_columns(const RecipeRun& run) {
  const bool wanted = run.config.setup.oracle.trials > 0;
  const bool ok = std::all_of(run.rows.begin(), run.rows.end(), [&](const SweepRow& r) {
    return r.oracle.has_value() == wanted &&
           (!r.oracle || (r.oracle->bep >= 0.0 && r.oracle->bep <= 1.0));
  });
  return result("oracle columns", ok,
                wanted ? "every row carries an oracle estimate" : "oracle disabled");
}

RecipeCheck ordering_check() {
  return {"architecture ordering", [](const RecipeRun& run) { return check_ordering(run.rows); }};
}

RecipeCheck oracle_check() { return {"oracle columns", oracle_columns}; }

CheckResult rtar_invariance(const RecipeRun& run) {
  const auto s = series(run.rows, Architecture::Rtar);
  if (s.empty()) return result("RTAR scale invariance", false, "no RTAR rows");
  double lo = s.front().second;
  double hi = lo;
  for (const auto& [g, b] : s) {
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  const double rel = (hi - lo) / hi;
  return result("RTAR scale invariance", rel <= 1e-12, "relative spread " + num(rel));
}

CheckResult nar_degrades(const RecipeRun& run) {
  const auto b1 = find_bep(run.rows, 1.0, Architecture::Nar);
  const auto b100 = find_bep(run.rows, 100.0, Architecture::Nar);
  if (!b1 || !b100) return result("NAR degrades at gamma=100", false, "grid lacks 1 or 100");
  return result("NAR degrades at gamma=100", *b100 > *b1,
                "NAR " + num(*b1) + " -> " + num(*b100));
}

CheckResult rear_between(const RecipeRun& run) {
  const auto n = find_bep(run.rows, 100.0, Architecture::Nar);
  const auto t = find_bep(run.rows, 100.0, Architecture::Rtar);
  const auto e = find_bep(run.rows, 100.0, Architecture::Rear);
  if (!n || !t || !e) return result("REAR between RTAR and NAR", false, "grid lacks 100");
  return result("REAR between RTAR and NAR", *t < *e && *e < *n,
                num(*t) + " < " + num(*e) + " < " + num(*n));
}

CheckResult saturation(const RecipeRun& run) {
  const double n_r = run.config.setup.receptor_count;
  for (const auto& r : run.rows) {
    if (r.arch == Architecture::Nar && r.param_value == 20.0) {
      const double p0 = r.stats0.mean / n_r;
      const double p1 = r.stats1.mean / n_r;
      return result("NAR saturation at 20 K*", p0 > 0.9 && p1 > 0.9,
                    "p_B = " + num(p0) + ", " + num(p1));
    }
  }
  return result("NAR saturation at 20 K*", false, "grid lacks 20");
}

CheckResult kd_increasing(const RecipeRun& run) {
  std::vector<double> rtar;
  std::vector<double> rear;
  for (const auto& r : run.rows) {
    if (r.arch == Architecture::Rtar) rtar.push_back(r.kd);
    if (r.arch == Architecture::Rear && r.kd_new) rear.push_back(*r.kd_new);
  }
  bool ok = !rtar.empty();
  for (std::size_t i = 1; i < rtar.size(); ++i) ok = ok && rtar[i] > rtar[i - 1];
  for (std::size_t i = 1; i < rear.size(); ++i) ok = ok && rear[i] >= rear[i - 1];
  return result("optimal K_D grows with the shift", ok,
                std::to_string(rtar.size()) + " RTAR and " + std::to_string(rear.size()) +
                    " REAR settings");
}

CheckResult nar_improves_with_ratio(const RecipeRun& run) {
  const auto s = series(run.rows, Architecture::Nar);
  bool ok = s.size() >= 2;
  for (std::size_t i = 1; i < s.size(); ++i) ok = ok && s[i].second < s[i - 1].second;
  return result("NAR improves with N1/N0", ok, std::to_string(s.size()) + " ratios");
}

CheckResult enzyme_equivalence(const RecipeRun& run) {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::Scaling;
  spec.architectures = run.config.scenario.architectures;
  const double ts = run.config.setup.channel.t_sample();
  std::vector<double> betas;
  for (const auto& r : run.rows) {
    if (betas.empty() || betas.back() != r.param_value) betas.push_back(r.param_value);
  }
  ModelSetup setup = run.config.setup;
  setup.oracle.trials = 0;
  double worst = 0.0;
  std::size_t compared = 0;
  for (const double beta : betas) {
    spec.grid = {std::exp(-beta * ts)};
    const auto scaled = run_scaling_sweep(spec, setup);
    for (const auto& s : scaled) {
      const auto e = find_bep(run.rows, beta, s.arch);
      if (!e) continue;
      worst = std::max(worst, std::abs(*e - s.bep_analytic) / s.bep_analytic);
      ++compared;
    }
  }
  return result("enzyme equals scaling at exp(-beta t_S)", compared > 0 && worst <= 1e-12,
                std::to_string(compared) + " rows, worst relative gap " + num(worst));
}

CheckResult rear_recovers(const RecipeRun& run) {
  const auto s = series(run.rows, Architecture::Rear);
  if (s.empty()) return result("REAR recovers at high beta", false, "no REAR rows");
  double peak = 0.0;
  for (const auto& [b, v] : s) peak = std::max(peak, v);
  return result("REAR recovers at high beta", s.back().second < peak,
                "last " + num(s.back().second) + ", peak " + num(peak));
}

CheckResult isi_gain(const RecipeRun& run) {
  const auto n = find_bep(run.rows, 4.0, Architecture::Nar, "genie");
  const auto t = find_bep(run.rows, 4.0, Architecture::Rtar, "genie");
  if (!n || !t) return result("ISI adaptivity gain at T_S = 4 t_Peak", false, "grid lacks 4");
  return result("ISI adaptivity gain at T_S = 4 t_Peak", *t * 5.0 <= *n,
                "NAR/RTAR = " + num(*n / *t));
}

CheckResult feedback_not_better(const RecipeRun& run) {
  if (run.config.setup.oracle.trials == 0) return result("decision feedback >= genie", true, "oracle disabled");
  std::size_t compared = 0;
  bool ok = true;
  std::string worst;
  for (const auto& g : run.rows) {
    if (g.knowledge != "genie" || !g.oracle) continue;
    for (const auto& d : run.rows) {
      if (d.knowledge != "decision-feedback" || !d.oracle || d.arch != g.arch ||
          d.param_value != g.param_value) {
        continue;
      }
      const double se = std::hypot(g.oracle->std_error, d.oracle->std_error);
      if (d.oracle->bep < g.oracle->bep - 3.0 * se) {
        ok = false;
        worst = std::string(to_string(g.arch)) + " at " + num(g.param_value);
      }
      ++compared;
    }
  }
  return result("decision feedback >= genie", ok && compared > 0,
                ok ? std::to_string(compared) + " pairs" : "violated by " + worst);
}

CheckResult memory_monotone(const RecipeRun& run) {
  bool ok = true;
  std::string where;
  for (const auto arch : {Architecture::Nar, Architecture::Rtar, Architecture::Rear}) {
    const auto s = series(run.rows, arch, "genie");
    for (std::size_t i = 1; i < s.size(); ++i) {
      // Rounding slack only: two sums of the same terms in another order.
      if (s[i].second > s[i - 1].second * (1.0 + 1e-12)) {
        ok = false;
        where = std::string(to_string(arch)) + " at M=" + num(s[i].first);
      }
    }
  }
  return result("BEP non-increasing in memory", ok, ok ? "all architectures" : where);
}

CheckResult knowledge_gain(const RecipeRun& run) {
  bool ok = true;
  std::size_t compared = 0;
  std::string where;
  for (const auto& fm : run.rows) {
    if (fm.knowledge != "first-moment") continue;
    const auto fs = find_bep(run.rows, fm.param_value, fm.arch, "full-stats");
    if (!fs) continue;
    ++compared;
    if (*fs > fm.bep_analytic * (1.0 + 1e-12)) {
      ok = false;
      where = std::string(to_string(fm.arch)) + " at " + num(fm.param_value);
    }
  }
  return result("full statistics never worse", ok && compared > 0,
                ok ? std::to_string(compared) + " pairs" : "violated by " + where);
}

CheckResult first_moment_gain(const RecipeRun& run) {
  const auto n = find_bep(run.rows, 2.0, Architecture::Nar, "first-moment");
  const auto t = find_bep(run.rows, 2.0, Architecture::Rtar, "first-moment");
  if (!n || !t) return result("RTAR first-moment gain at 2 K*", false, "grid lacks 2");
  return result("RTAR first-moment gain at 2 K*", *t <= 0.1 * *n, "RTAR/NAR = " + num(*t / *n));
}

Receptors receptors_of(const SweepRow& row, const ModelSetup& setup) {
  if (row.kd_new) return MixtureConfig{*row.kd_new, row.kd, setup.alpha, setup.receptor_count};
  return ReceptorConfig{row.kd, setup.receptor_count};
}

CheckResult response_curves(const RecipeRun& run) {
  bool ok = !run.rows.empty();
  std::string detail;
  for (const auto& row : run.rows) {
    const auto receptors = receptors_of(row, run.config.setup);
    const auto grid = centred_log_grid(row.kd, 4.0, 40);
    const auto curve = export_response_curve(receptors, grid);
    if (!row.kd_new) {
      const double product = curve.c10 * curve.c90 / (row.kd * row.kd);
      const bool half = curve.occupancy[40] == 0.5;
      if (std::abs(product - 1.0) > 1e-12 || !half) {
        ok = false;
        detail = "single-population curve off at " + num(row.param_value);
      }
    } else {
      const double single_span = 81.0;
      const double span = curve.c90 / curve.c10;
      if (!(span > single_span)) {
        ok = false;
        detail = "mixture span " + num(span) + " not wider than 81";
      }
    }
  }
  return result("dynamic range endpoints", ok,
                ok ? std::to_string(run.rows.size()) + " curves" : detail);
}

}  // namespace

CheckResult check_ordering(const std::vector<SweepRow>& rows, double eps) {
  std::map<std::pair<double, std::string>, std::map<Architecture, double>> groups;
  for (const auto& r : rows) groups[{r.param_value, r.knowledge}][r.arch] = r.bep_analytic;
  std::size_t checked = 0;
  for (const auto& [key, beps] : groups) {
    const auto nar = beps.find(Architecture::Nar);
    const auto rtar = beps.find(Architecture::Rtar);
    const auto rear = beps.find(Architecture::Rear);
    bool ok = true;
    if (rtar != beps.end() && rear != beps.end()) ok = ok && rtar->second <= rear->second + eps;
    if (rear != beps.end() && nar != beps.end()) ok = ok && rear->second <= nar->second + eps;
    if (rtar != beps.end() && nar != beps.end()) ok = ok && rtar->second <= nar->second + eps;
    if (!ok) {
      return result("architecture ordering", false,
                    "violated at " + num(key.first) + (key.second.empty() ? "" : " " + key.second));
    }
    ++checked;
  }
  return result("architecture ordering", checked > 0, std::to_string(checked) + " sweep points");
}

std::vector<FigureRecipe> list_recipes() {
  return {
      {3, "scaling", "scaling.cfg", "Scaling of the received levels",
       {ordering_check(), {"RTAR scale invariance", rtar_invariance},
        {"NAR degrades at gamma=100", nar_degrades},
        {"REAR between RTAR and NAR", rear_between}, oracle_check()}},
      {4, "shift", "shift.cfg", "Additive shift of the received levels",
       {ordering_check(), {"NAR saturation at 20 K*", saturation},
        {"optimal K_D grows with the shift", kd_increasing}, oracle_check()}},
      {5, "ratio", "ratio.cfg", "Shifted levels across N1/N0 ratios",
       {ordering_check(), {"NAR improves with N1/N0", nar_improves_with_ratio}, oracle_check()}},
      {6, "enzyme", "enzyme.cfg", "Enzymatic degradation",
       {ordering_check(), {"enzyme equals scaling at exp(-beta t_S)", enzyme_equivalence},
        {"REAR recovers at high beta", rear_recovers}, oracle_check()}},
      {7, "isi-interval", "isi_interval.cfg", "ISI against the signaling interval",
       {ordering_check(), {"ISI adaptivity gain at T_S = 4 t_Peak", isi_gain},
        {"decision feedback >= genie", feedback_not_better}, oracle_check()}},
      {8, "isi-memory", "isi_memory.cfg", "ISI against the receiver memory",
       {ordering_check(), {"BEP non-increasing in memory", memory_monotone},
        {"decision feedback >= genie", feedback_not_better}, oracle_check()}},
      {9, "response-curves", "response_curves.cfg", "Response curves under shifts",
       {{"dynamic range endpoints", response_curves},
        {"NAR saturation at 20 K*", saturation}, oracle_check()}},
      {10, "interference", "interference.cfg", "Stochastic interference",
       {ordering_check(), {"full statistics never worse", knowledge_gain},
        {"RTAR first-moment gain at 2 K*", first_moment_gain}, oracle_check()}},
  };
}

std::string recipe_directory() {
  if (const char* env = std::getenv("AMC_RECIPE_DIR"); env != nullptr && *env != '\0') return env;
  return AMC_RECIPE_DIR;
}

bool RecipeReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

RecipeReport run_recipe(const FigureRecipe& recipe, std::optional<std::uint64_t> trials,
                        const std::string& directory) {
  RecipeReport report;
  report.run.config = load_config(directory + "/" + recipe.config_file);
  if (trials) report.run.config.setup.oracle.trials = *trials;
  report.run.rows = run_sweep(report.run.config.scenario, report.run.config.setup);
  for (const auto& check : recipe.checks) report.checks.push_back(check.run(report.run));
  return report;
}

}  // namespace amc
