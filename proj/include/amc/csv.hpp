#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "amc/scenarios.hpp"

namespace amc {

inline constexpr const char* kSweepColumns =
    "scenario,param_name,param_value,arch,knowledge,KD,KD_new,threshold,mean0,var0,mean1,var1,"
    "bep_analytic,bep_mc,mc_se,trials";

/// Run metadata written as the first line of every CSV.
struct CsvMeta {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

/// Scientific notation with `significant` digits, independent of locale.
std::string format_number(double value, int significant = 12);

/// "# amc <version> config_hash=<hex> seed=<n> prng=<id>"
std::string metadata_line(const CsvMeta& meta);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, const CsvMeta& meta,
                     int significant = 12);

}  // namespace amc
