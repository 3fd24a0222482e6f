#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "amc/channel.hpp"
#include "amc/numerics.hpp"
#include "amc/receptor.hpp"

namespace amc {

enum class OracleMode { Genie, DecisionFeedback };

std::string_view to_string(OracleMode mode);

struct OracleConfig {
  std::uint64_t trials = 0;
  std::uint64_t seed = 42;
  std::uint64_t chunk_size = 1 << 16;
  OracleMode mode = OracleMode::Genie;
  bool exact_binomial = true;  ///< false draws n_B from the Gaussian approximation
  unsigned threads = 0;        ///< 0 uses the hardware concurrency
};

/// Memory channel seen by one receiver. Taps are per released molecule,
/// oldest history symbol last (tap k belongs to the symbol k slots back).
struct IsiLink {
  ChannelParams channel;
  std::vector<double> taps;
  int memory = 0;  ///< M, remembered symbols
};

/// Everything one trial needs: levels c*_s, receptors, and either a fixed
/// threshold or an ISI link whose per-symbol threshold is rebuilt from the
/// memory estimate.
struct OraclePoint {
  double c0 = 0.0;
  double c1 = 0.0;
  double p1 = 0.5;
  Receptors receptors = ReceptorConfig{};
  std::optional<double> threshold;
  std::optional<LognormalSpec> interference;
  std::optional<IsiLink> isi;
};

struct BepEstimate {
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  double bep = 0.0;
  /// sqrt(b(1-b)/n); 3/n when no error was seen.
  double std_error = 0.0;
};

/// Monte Carlo bit-error estimate. Trial i draws from its own stream keyed
/// by split_seed(seed, i), so results do not depend on threads or chunking.
/// Throws ConfigError when trials == 0 or the point lacks a threshold
/// outside ISI mode, and DomainError on invalid receptors.
BepEstimate simulate_bep(const OraclePoint& point, const OracleConfig& cfg);

}  // namespace amc
