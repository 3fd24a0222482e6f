#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "amc/scenarios.hpp"

namespace amc {

struct OutputConfig {
  std::string csv_path;  ///< empty writes to stdout
  std::string svg_path;  ///< empty skips the plot
  int precision = 12;    ///< significant digits in CSV numbers
};

/// Everything a run needs. Defaults reproduce the reference parameter set.
struct RunConfig {
  ModelSetup setup;
  ScenarioSpec scenario;
  OutputConfig output;

  /// Throws ValidationError.
  void validate() const;
};

/// Parses sectioned `key = value` text:
///
///     # comment
///     [channel]
///     N0_ratio = 25
///
/// Unknown sections or keys raise ParseError carrying the line and key;
/// out-of-range values raise ValidationError.
RunConfig parse_config(std::string_view text);
/// Reads and parses a file; ConfigError when it cannot be read.
RunConfig load_config(const std::string& path);

/// Canonical text of every setting that affects results, in a fixed order.
/// Output paths are left out so the hash follows the numbers, not the files.
std::string canonical_config(const RunConfig& cfg);
/// canonical_config plus the output section; `amc defaults` prints this.
std::string format_config(const RunConfig& cfg);
/// 64-bit FNV-1a of canonical_config.
std::uint64_t config_hash(const RunConfig& cfg);

/// Grid text: comma list ("0, 0.5, 1"), "log:lo:hi:n" or "lin:lo:hi:n".
std::vector<double> parse_grid(std::string_view text);

/// Shortest round-trip decimal form.
std::string format_shortest(double value);

}  // namespace amc
