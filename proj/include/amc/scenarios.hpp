#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amc/adaptation.hpp"
#include "amc/channel.hpp"
#include "amc/oracle.hpp"

namespace amc {

enum class ScenarioKind { Scaling, Shift, Enzyme, IsiTs, IsiMemory, Interference, RatioSweep };
enum class Knowledge { FirstMoment, FullStats };

std::string_view to_string(ScenarioKind kind);
std::string_view to_string(Knowledge knowledge);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view text);
std::optional<Knowledge> parse_knowledge(std::string_view text);
/// Name of the swept parameter as it appears in the CSV.
std::string_view param_name(ScenarioKind kind);

/// Shared model settings for every sweep.
struct ModelSetup {
  ChannelParams channel;
  int receptor_count = 1000;
  double alpha = 0.5;
  int memory = 2;                    ///< M for IsiTs sweeps
  int sampled_patterns = 4096;       ///< ISI patterns when I > kMaxEnumeratedMemory
  double interference_std_fraction = 0.1;
  double interference_mean_over_kstar = 2.0;  ///< default point for single evaluations
  double ratio_shift_over_kstar = 10.0;       ///< shift applied in RatioSweep
  QuadratureConfig quadrature;
  KdSearch search;
  OracleConfig oracle;  ///< seed and trial budget for oracle columns
  /// Oracle modes reported by ISI sweeps, one row each.
  std::vector<OracleMode> isi_oracle_modes{OracleMode::Genie, OracleMode::DecisionFeedback};

  /// Throws ValidationError.
  void validate() const;
};

inline constexpr int kMaxEnumeratedMemory = 14;

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Scaling;
  std::vector<double> grid;  ///< empty selects default_grid(kind)
  std::vector<Architecture> architectures{Architecture::Nar, Architecture::Rtar,
                                          Architecture::Rear};
  std::vector<Knowledge> knowledge{Knowledge::FirstMoment, Knowledge::FullStats};

  /// Throws ValidationError when the grid is not strictly increasing, or out
  /// of domain for the scenario.
  void validate(const ModelSetup& setup) const;
};

std::vector<double> default_grid(ScenarioKind kind);
/// n points log-spaced from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

struct SweepRow {
  ScenarioKind scenario = ScenarioKind::Scaling;
  double param_value = 0.0;
  Architecture arch = Architecture::Nar;
  std::string knowledge;  ///< first-moment/full-stats, genie/decision-feedback, or empty
  double kd = 0.0;
  std::optional<double> kd_new;
  double threshold = 0.0;
  BindingStats stats0;
  BindingStats stats1;
  double bep_analytic = 0.0;
  std::optional<BepEstimate> oracle;
};

/// Baseline operating point of the configured channel.
struct Baseline {
  double c0;
  double c1;
  double kd;  ///< K* = sqrt(c0 c1)
};
Baseline baseline(const ChannelParams& channel);

std::vector<SweepRow> run_scaling_sweep(const ScenarioSpec& spec, const ModelSetup& setup);
std::vector<SweepRow> run_shift_sweep(const ScenarioSpec& spec, const ModelSetup& setup);
std::vector<SweepRow> run_enzyme_sweep(const ScenarioSpec& spec, const ModelSetup& setup);
std::vector<SweepRow> run_isi_sweep(const ScenarioSpec& spec, const ModelSetup& setup);
std::vector<SweepRow> run_interference_sweep(const ScenarioSpec& spec, const ModelSetup& setup);
std::vector<SweepRow> run_ratio_sweep(const ScenarioSpec& spec, const ModelSetup& setup);
/// Dispatches on spec.kind.
std::vector<SweepRow> run_sweep(const ScenarioSpec& spec, const ModelSetup& setup);

/// One ISI grid point for one receiver.
struct IsiEvaluation {
  double omega0;          ///< tail-mean ISI estimate used for tuning
  DecisionModel nominal;  ///< stats and threshold at c* + omega0
  double bep;             ///< pattern-averaged, genie-aided
};

/// Genie-aided pattern-averaged BEP of `receptors` on the memory channel
/// of `channel` with memory M.
IsiEvaluation evaluate_isi(const ChannelParams& channel, const Receptors& receptors, int memory,
                           const ModelSetup& setup);

struct ResponseCurve {
  std::vector<double> concentration;
  std::vector<double> occupancy;
  double c10;
  double c90;
};

/// Occupancy over c_grid plus the 10%/90% occupancy concentrations.
ResponseCurve export_response_curve(const Receptors& receptors, std::span<const double> c_grid);
/// Log grid of 2*half+1 points spanning +-decades around centre, with the
/// centre point exactly equal to `centre`.
std::vector<double> centred_log_grid(double centre, double decades, int half);

}  // namespace amc
