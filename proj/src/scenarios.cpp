#include "amc/scenarios.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "amc/errors.hpp"
#include "amc/rng.hpp"

namespace amc {

namespace {

// Stream key reserved for the sampled ISI pattern set, outside the range
// used for per-row oracle seeds.
constexpr std::uint64_t kPatternStream = 0xffffffff00000000ULL;

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

bool contains(const std::vector<Architecture>& archs, Architecture a) {
  return std::find(archs.begin(), archs.end(), a) != archs.end();
}

// Architectures in canonical order, restricted to those requested.
std::vector<Architecture> ordered(const std::vector<Architecture>& requested) {
  std::vector<Architecture> out;
  for (auto a : {Architecture::Nar, Architecture::Rtar, Architecture::Rear}) {
    if (contains(requested, a)) out.push_back(a);
  }
  return out;
}

std::vector<double> resolved_grid(const ScenarioSpec& spec) {
  return spec.grid.empty() ? default_grid(spec.kind) : spec.grid;
}

class RowSink {
 public:
  RowSink(ScenarioKind kind, const ModelSetup& setup) : kind_(kind), setup_(setup) {}

  SweepRow start(double value, Architecture arch, std::string knowledge = {}) const {
    SweepRow row;
    row.scenario = kind_;
    row.param_value = value;
    row.arch = arch;
    row.knowledge = std::move(knowledge);
    return row;
  }

  // Appends a row, running the oracle on `point` when trials are configured.
  void push(SweepRow row, const OraclePoint& point,
            OracleMode mode = OracleMode::Genie) {
    if (setup_.oracle.trials > 0) {
      OracleConfig cfg = setup_.oracle;
      cfg.mode = mode;
      cfg.seed = split_seed(setup_.oracle.seed, rows_.size());
      row.oracle = simulate_bep(point, cfg);
    }
    rows_.push_back(std::move(row));
  }

  [[nodiscard]] bool oracle_enabled() const { return setup_.oracle.trials > 0; }
  std::vector<SweepRow> take() { return std::move(rows_); }

 private:
  ScenarioKind kind_;
  const ModelSetup& setup_;
  std::vector<SweepRow> rows_;
};

struct Tuned {
  Receptors receptors;
  double kd;
  std::optional<double> kd_new;
};

Tuned single(double kd, const ModelSetup& setup) {
  return {ReceptorConfig{kd, setup.receptor_count}, kd, std::nullopt};
}

Tuned mixture(double kd_new, double kd_base, const ModelSetup& setup) {
  return {MixtureConfig{kd_new, kd_base, setup.alpha, setup.receptor_count}, kd_base, kd_new};
}

// Deterministic levels: NAR keeps the baseline, RTAR takes `rtar_kd`, REAR
// optimizes its new population against the levels.
void deterministic_rows(RowSink& sink, const ScenarioSpec& spec, const ModelSetup& setup,
                        double value, double c0, double c1, double baseline_kd,
                        double rtar_kd) {
  const SignalModel model{c0, c1, std::nullopt, setup.channel.p1};
  for (const auto arch : ordered(spec.architectures)) {
    Tuned tuned = single(baseline_kd, setup);
    if (arch == Architecture::Rtar) tuned = single(rtar_kd, setup);
    if (arch == Architecture::Rear) {
      const auto opt = optimize_kd_new_rear(model, setup.receptor_count, baseline_kd,
                                            setup.alpha, setup.quadrature, setup.search);
      tuned = mixture(opt.kd, baseline_kd, setup);
    }
    const auto dm = model_decision(model, tuned.receptors, setup.quadrature);
    SweepRow row = sink.start(value, arch);
    row.kd = tuned.kd;
    row.kd_new = tuned.kd_new;
    row.threshold = dm.threshold;
    row.stats0 = dm.stats0;
    row.stats1 = dm.stats1;
    row.bep_analytic = bep_with_prior(dm.stats0, dm.stats1, dm.threshold, model.p1);

    OraclePoint point;
    point.c0 = c0;
    point.c1 = c1;
    point.p1 = model.p1;
    point.receptors = tuned.receptors;
    point.threshold = dm.threshold;
    sink.push(std::move(row), point);
  }
}

struct Pattern {
  std::vector<std::uint8_t> bits;  ///< bits[k-1] is the symbol k slots back
  double weight;
};

std::vector<Pattern> isi_patterns(const ChannelParams& ch, const ModelSetup& setup) {
  const int depth = ch.memory_length;
  std::vector<Pattern> out;
  if (depth <= kMaxEnumeratedMemory) {
    const std::uint32_t count = 1U << depth;
    out.reserve(count);
    for (std::uint32_t m = 0; m < count; ++m) {
      Pattern p{std::vector<std::uint8_t>(static_cast<std::size_t>(depth)), 1.0};
      for (int k = 0; k < depth; ++k) {
        const bool one = ((m >> k) & 1U) != 0;
        p.bits[static_cast<std::size_t>(k)] = one ? 1 : 0;
        p.weight *= one ? ch.p1 : ch.p0();
      }
      out.push_back(std::move(p));
    }
    return out;
  }
  Xoshiro256 rng(split_seed(setup.oracle.seed, kPatternStream));
  const double w = 1.0 / setup.sampled_patterns;
  out.reserve(static_cast<std::size_t>(setup.sampled_patterns));
  for (int i = 0; i < setup.sampled_patterns; ++i) {
    Pattern p{std::vector<std::uint8_t>(static_cast<std::size_t>(depth)), w};
    for (auto& b : p.bits) b = rng.uniform() < ch.p1 ? 1 : 0;
    out.push_back(std::move(p));
  }
  return out;
}

double tail_mean(const ChannelParams& ch, const std::vector<double>& taps, int memory) {
  double tail = 0.0;
  for (std::size_t k = static_cast<std::size_t>(memory); k < taps.size(); ++k) tail += taps[k];
  return ch.mean_molecules() * tail;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Scaling: return "scaling";
    case ScenarioKind::Shift: return "shift";
    case ScenarioKind::Enzyme: return "enzyme";
    case ScenarioKind::IsiTs: return "isi-ts";
    case ScenarioKind::IsiMemory: return "isi-memory";
    case ScenarioKind::Interference: return "interference";
    case ScenarioKind::RatioSweep: return "ratio";
  }
  return "?";
}

std::string_view to_string(Knowledge knowledge) {
  return knowledge == Knowledge::FirstMoment ? "first-moment" : "full-stats";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view text) {
  const std::string t = lower(text);
  for (auto k : {ScenarioKind::Scaling, ScenarioKind::Shift, ScenarioKind::Enzyme,
                 ScenarioKind::IsiTs, ScenarioKind::IsiMemory, ScenarioKind::Interference,
                 ScenarioKind::RatioSweep}) {
    if (t == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<Knowledge> parse_knowledge(std::string_view text) {
  const std::string t = lower(text);
  if (t == "first-moment") return Knowledge::FirstMoment;
  if (t == "full-stats") return Knowledge::FullStats;
  return std::nullopt;
}

std::string_view param_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Scaling: return "gamma";
    case ScenarioKind::Shift: return "shift_over_Kstar";
    case ScenarioKind::Enzyme: return "beta_per_s";
    case ScenarioKind::IsiTs: return "Ts_factor";
    case ScenarioKind::IsiMemory: return "memory_M";
    case ScenarioKind::Interference: return "mean_over_Kstar";
    case ScenarioKind::RatioSweep: return "N1_over_N0";
  }
  return "?";
}

void ModelSetup::validate() const {
  channel.validate();
  if (receptor_count < 1) throw ValidationError("N_R >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha in (0,1)");
  if (memory < 0 || memory > channel.memory_length) throw ValidationError("0 <= M <= I");
  if (sampled_patterns < 1) throw ValidationError("patterns >= 1");
  if (!(interference_std_fraction >= 0.0)) throw ValidationError("std_fraction >= 0");
  if (!(interference_mean_over_kstar > 0.0)) throw ValidationError("mean_over_Kstar > 0");
  if (!(ratio_shift_over_kstar >= 0.0)) throw ValidationError("shift_over_Kstar >= 0");
  if (!(search.decades > 0.0) || !(search.tol > 0.0) || search.scan_points < 3) {
    throw ValidationError("K_D search window");
  }
  if (oracle.chunk_size == 0) throw ValidationError("chunk_size > 0");
  if (isi_oracle_modes.empty()) throw ValidationError("oracle modes non-empty");
  try {
    quadrature.validate();
  } catch (const ConfigError& e) {
    throw ValidationError(e.what());
  }
}

void ScenarioSpec::validate(const ModelSetup& setup) const {
  const auto g = resolved_grid(*this);
  if (g.empty()) throw ValidationError("grid non-empty");
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) throw ValidationError("grid strictly increasing");
  }
  if (architectures.empty()) throw ValidationError("architectures non-empty");
  if (kind == ScenarioKind::Interference && knowledge.empty()) {
    throw ValidationError("knowledge non-empty");
  }
  const double first = g.front();
  switch (kind) {
    case ScenarioKind::Scaling:
    case ScenarioKind::IsiTs:
    case ScenarioKind::Interference:
      if (!(first > 0.0)) throw ValidationError(std::string(param_name(kind)) + " > 0");
      break;
    case ScenarioKind::Shift:
    case ScenarioKind::Enzyme:
      if (!(first >= 0.0)) throw ValidationError(std::string(param_name(kind)) + " >= 0");
      break;
    case ScenarioKind::RatioSweep:
      if (!(first > 1.0)) throw ValidationError("N1_over_N0 > 1");
      break;
    case ScenarioKind::IsiMemory:
      for (double m : g) {
        if (m != std::floor(m) || m < 0.0 || m > setup.channel.memory_length) {
          throw ValidationError("memory_M integer in [0, I]");
        }
      }
      break;
  }
  if (!std::all_of(g.begin(), g.end(), [](double v) { return std::isfinite(v); })) {
    throw ValidationError("grid values finite");
  }
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n == 1) return {lo};
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = std::pow(10.0, (a * (n - 1 - i) + b * i) / (n - 1));
  }
  return out;
}

std::vector<double> default_grid(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Scaling: return log_grid(0.01, 100.0, 25);
    case ScenarioKind::Shift: return {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0};
    case ScenarioKind::Enzyme: {
      std::vector<double> g;
      for (int i = 0; i < 16; ++i) g.push_back(i / 10.0);
      return g;
    }
    case ScenarioKind::IsiTs: return {2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
    case ScenarioKind::IsiMemory: return {0, 1, 2, 3, 4, 5, 6, 7, 8};
    case ScenarioKind::Interference: return log_grid(0.1, 100.0, 13);
    case ScenarioKind::RatioSweep: return {5.0, 10.0, 25.0, 50.0, 100.0, 200.0};
  }
  return {};
}

Baseline baseline(const ChannelParams& channel) {
  const double ts = channel.t_sample();
  const double c0 = received_concentration(0, channel, ts);
  const double c1 = received_concentration(1, channel, ts);
  return {c0, c1, kd_opt_baseline(c0, c1)};
}

std::vector<SweepRow> run_scaling_sweep(const ScenarioSpec& spec, const ModelSetup& setup) {
  spec.validate(setup);
  setup.validate();
  const auto base = baseline(setup.channel);
  RowSink sink(ScenarioKind::Scaling, setup);
  for (const double gamma : resolved_grid(spec)) {
    deterministic_rows(sink, spec, setup, gamma, gamma * base.c0, gamma * base.c1, base.kd,
                       kd_opt_scaled(gamma, base.kd));
  }
  return sink.take();
}

std::vector<SweepRow> run_shift_sweep(const ScenarioSpec& spec, const ModelSetup& setup) {
  spec.validate(setup);
  setup.validate();
  const auto base = baseline(setup.channel);
  RowSink sink(ScenarioKind::Shift, setup);
  for (const double m : resolved_grid(spec)) {
    const double delta = m * base.kd;
    deterministic_rows(sink, spec, setup, m, base.c0 + delta, base.c1 + delta, base.kd,
                       kd_opt_shift(delta, base.c0, base.c1));
  }
  return sink.take();
}

std::vector<SweepRow> run_enzyme_sweep(const ScenarioSpec& spec, const ModelSetup& setup) {
  spec.validate(setup);
  setup.validate();
  const auto base = baseline(setup.channel);
  const double ts = setup.channel.t_sample();
  const double h = cir(ts, setup.channel.distance, setup.channel.diffusion);
  RowSink sink(ScenarioKind::Enzyme, setup);
  for (const double beta : resolved_grid(spec)) {
    const double decay = std::exp(-beta * ts);
    // Same factorization as the scaling sweep: decay * (N h) + c_int.
    const double c0 = decay * (setup.channel.n0 * h) + setup.channel.c_int_const;
    const double c1 = decay * (setup.channel.n1 * h) + setup.channel.c_int_const;
    const double rtar = setup.channel.c_int_const == 0.0 ? kd_opt_scaled(decay, base.kd)
                                                         : kd_opt_baseline(c0, c1);
    deterministic_rows(sink, spec, setup, beta, c0, c1, base.kd, rtar);
  }
  return sink.take();
}

std::vector<SweepRow> run_ratio_sweep(const ScenarioSpec& spec, const ModelSetup& setup) {
  spec.validate(setup);
  setup.validate();
  RowSink sink(ScenarioKind::RatioSweep, setup);
  for (const double ratio : resolved_grid(spec)) {
    ChannelParams ch = setup.channel;
    ch.n0 = ch.n1 / ratio;
    const auto base = baseline(ch);
    const double delta = setup.ratio_shift_over_kstar * base.kd;
    deterministic_rows(sink, spec, setup, ratio, base.c0 + delta, base.c1 + delta, base.kd,
                       kd_opt_shift(delta, base.c0, base.c1));
  }
  return sink.take();
}

IsiEvaluation evaluate_isi(const ChannelParams& channel, const Receptors& receptors, int memory,
                           const ModelSetup& setup) {
  if (memory < 0 || memory > channel.memory_length) {
    throw LengthMismatch("memory M must lie in [0, I]");
  }
  const double ts = channel.t_sample();
  const auto taps = isi_taps(channel, ts);
  const auto base = baseline(channel);
  const double omega0 = tail_mean(channel, taps, 0);
  const double tail = tail_mean(channel, taps, memory);

  IsiEvaluation out{};
  out.omega0 = omega0;
  out.nominal = make_decision_model(binding_stats(base.c0 + omega0, receptors),
                                    binding_stats(base.c1 + omega0, receptors));

  double total = 0.0;
  double weight = 0.0;
  for (const auto& p : isi_patterns(channel, setup)) {
    double omega = 0.0;
    double estimate = tail;
    for (std::size_t k = 0; k < taps.size(); ++k) {
      const double contrib = channel.molecules(p.bits[k]) * taps[k];
      omega += contrib;
      if (k < static_cast<std::size_t>(memory)) estimate += contrib;
    }
    const double lambda = optimal_threshold(binding_stats(base.c0 + estimate, receptors),
                                            binding_stats(base.c1 + estimate, receptors));
    total += p.weight * bep_with_prior(binding_stats(base.c0 + omega, receptors),
                                       binding_stats(base.c1 + omega, receptors), lambda,
                                       channel.p1);
    weight += p.weight;
  }
  out.bep = total / weight;
  return out;
}

std::vector<SweepRow> run_isi_sweep(const ScenarioSpec& spec, const ModelSetup& setup) {
  spec.validate(setup);
  setup.validate();
  if (spec.kind != ScenarioKind::IsiTs && spec.kind != ScenarioKind::IsiMemory) {
    throw ConfigError("run_isi_sweep: scenario kind must be isi-ts or isi-memory");
  }
  RowSink sink(spec.kind, setup);
  for (const double value : resolved_grid(spec)) {
    ChannelParams ch = setup.channel;
    int memory = setup.memory;
    if (spec.kind == ScenarioKind::IsiTs) {
      ch.ts_factor = value;
    } else {
      memory = static_cast<int>(value);
    }
    const auto base = baseline(ch);
    const auto taps = isi_taps(ch, ch.t_sample());
    const double omega0 = tail_mean(ch, taps, 0);

    for (const auto arch : ordered(spec.architectures)) {
      Tuned tuned = single(base.kd, setup);
      if (arch == Architecture::Rtar) {
        tuned = single(kd_opt_isi(omega0, base.c0, base.c1), setup);
      } else if (arch == Architecture::Rear) {
        const SignalModel nominal{base.c0 + omega0, base.c1 + omega0, std::nullopt, ch.p1};
        const auto opt = optimize_kd_new_rear(nominal, setup.receptor_count, base.kd,
                                              setup.alpha, setup.quadrature, setup.search);
        tuned = mixture(opt.kd, base.kd, setup);
      }
      const auto eval = evaluate_isi(ch, tuned.receptors, memory, setup);

      OraclePoint point;
      point.c0 = base.c0;
      point.c1 = base.c1;
      point.p1 = ch.p1;
      point.receptors = tuned.receptors;
      point.isi = IsiLink{ch, taps, memory};

      const auto modes = sink.oracle_enabled() ? setup.isi_oracle_modes
                                               : std::vector<OracleMode>{OracleMode::Genie};
      for (const auto mode : modes) {
        SweepRow row = sink.start(value, arch, std::string(to_string(mode)));
        row.kd = tuned.kd;
        row.kd_new = tuned.kd_new;
        row.threshold = eval.nominal.threshold;
        row.stats0 = eval.nominal.stats0;
        row.stats1 = eval.nominal.stats1;
        row.bep_analytic = eval.bep;
        sink.push(std::move(row), point, mode);
      }
    }
  }
  return sink.take();
}

std::vector<SweepRow> run_interference_sweep(const ScenarioSpec& spec, const ModelSetup& setup) {
  spec.validate(setup);
  setup.validate();
  const auto base = baseline(setup.channel);
  const double p1 = setup.channel.p1;
  RowSink sink(ScenarioKind::Interference, setup);
  std::vector<Knowledge> knowledge;
  for (auto k : {Knowledge::FirstMoment, Knowledge::FullStats}) {
    if (std::find(spec.knowledge.begin(), spec.knowledge.end(), k) != spec.knowledge.end()) {
      knowledge.push_back(k);
    }
  }

  for (const double m : resolved_grid(spec)) {
    const double mu = m * base.kd;
    const LognormalSpec dist(mu, setup.interference_std_fraction * mu);
    const SignalModel shifted{base.c0 + mu, base.c1 + mu, std::nullopt, p1};
    const SignalModel random{base.c0, base.c1, dist, p1};

    for (const auto arch : ordered(spec.architectures)) {
      // The first-moment REAR setting doubles as an anchor for full stats.
      std::optional<double> rear_first_moment;
      for (const auto know : knowledge) {
        Tuned tuned = single(base.kd, setup);
        if (arch == Architecture::Rtar) {
          const double first = kd_opt_interference_mean(mu, base.c0, base.c1);
          tuned = know == Knowledge::FirstMoment
                      ? single(first, setup)
                      : single(optimize_kd_rtar_full_stats(random, setup.receptor_count,
                                                           base.kd, setup.quadrature,
                                                           setup.search)
                                   .kd,
                               setup);
        } else if (arch == Architecture::Rear) {
          if (!rear_first_moment) {
            rear_first_moment = optimize_kd_new_rear(shifted, setup.receptor_count, base.kd,
                                                     setup.alpha, setup.quadrature,
                                                     setup.search)
                                    .kd;
          }
          double kd_new = *rear_first_moment;
          if (know == Knowledge::FullStats) {
            kd_new = optimize_kd_new_rear(random, setup.receptor_count, base.kd, setup.alpha,
                                          setup.quadrature, setup.search, {kd_new})
                         .kd;
          }
          tuned = mixture(kd_new, base.kd, setup);
        }

        const BindingStats s0 = model_stats(random, 0, tuned.receptors, setup.quadrature);
        const BindingStats s1 = model_stats(random, 1, tuned.receptors, setup.quadrature);
        const double lambda =
            know == Knowledge::FirstMoment
                ? model_decision(shifted, tuned.receptors, setup.quadrature).threshold
                : optimal_threshold(s0, s1);

        SweepRow row = sink.start(m, arch, std::string(to_string(know)));
        row.kd = tuned.kd;
        row.kd_new = tuned.kd_new;
        row.threshold = lambda;
        row.stats0 = s0;
        row.stats1 = s1;
        row.bep_analytic = bep_with_prior(s0, s1, lambda, p1);

        OraclePoint point;
        point.c0 = base.c0;
        point.c1 = base.c1;
        point.p1 = p1;
        point.receptors = tuned.receptors;
        point.threshold = lambda;
        point.interference = dist;
        sink.push(std::move(row), point);
      }
    }
  }
  return sink.take();
}

std::vector<SweepRow> run_sweep(const ScenarioSpec& spec, const ModelSetup& setup) {
  switch (spec.kind) {
    case ScenarioKind::Scaling: return run_scaling_sweep(spec, setup);
    case ScenarioKind::Shift: return run_shift_sweep(spec, setup);
    case ScenarioKind::Enzyme: return run_enzyme_sweep(spec, setup);
    case ScenarioKind::IsiTs:
    case ScenarioKind::IsiMemory: return run_isi_sweep(spec, setup);
    case ScenarioKind::Interference: return run_interference_sweep(spec, setup);
    case ScenarioKind::RatioSweep: return run_ratio_sweep(spec, setup);
  }
  throw ConfigError("unknown scenario kind");
}

std::vector<double> centred_log_grid(double centre, double decades, int half) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * half + 1));
  for (int j = -half; j <= half; ++j) {
    out.push_back(j == 0 ? centre : centre * std::pow(10.0, decades * j / half));
  }
  return out;
}

ResponseCurve export_response_curve(const Receptors& receptors, std::span<const double> c_grid) {
  validate(receptors);
  ResponseCurve curve;
  curve.concentration.assign(c_grid.begin(), c_grid.end());
  curve.occupancy.reserve(c_grid.size());
  for (const double c : c_grid) curve.occupancy.push_back(occupancy(c, receptors));

  if (const auto* s = std::get_if<ReceptorConfig>(&receptors)) {
    curve.c10 = s->kd / 9.0;
    curve.c90 = 9.0 * s->kd;
    return curve;
  }
  const auto& mix = std::get<MixtureConfig>(receptors);
  auto solve = [&](double target) {
    double lo = std::log(std::min(mix.kd_new, mix.kd_base)) - 30.0;
    double hi = std::log(std::max(mix.kd_new, mix.kd_base)) + 30.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mixture_bind_prob(std::exp(mid), mix) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return std::exp(0.5 * (lo + hi));
  };
  curve.c10 = solve(0.1);
  curve.c90 = solve(0.9);
  return curve;
}

}  // namespace amc
