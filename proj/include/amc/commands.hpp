#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "amc/config.hpp"
#include "amc/scenarios.hpp"

namespace amc {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitNumerical = 3 };

/// One analytic-vs-oracle comparison of the built-in matrix.
struct ValidationPoint {
  std::string label;
  RunConfig config;  ///< single-point grid, single architecture
};

/// Twelve points spanning the scaling, shift, enzyme, ISI and
/// interference scenarios, each with analytic BEP >= 1e-4.
std::vector<ValidationPoint> validation_matrix();

struct ValidationOutcome {
  std::string label;
  SweepRow row;
  double z = 0.0;  ///< (analytic - oracle) / SE
  bool agrees = false;
};

/// Runs every matrix point with `trials` oracle trials. Point i draws
/// from split_seed(seed, i).
std::vector<ValidationOutcome> run_validation(std::uint64_t trials, std::uint64_t seed,
                                              unsigned threads = 0);

/// Entry point of the `amc` tool. Returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace amc
