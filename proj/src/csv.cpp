#include "amc/csv.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "amc/rng.hpp"

#ifndef AMC_VERSION
#define AMC_VERSION "0.0.0"
#endif

namespace amc {

std::string format_number(double value, int significant) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                       std::chars_format::scientific, significant - 1);
  return std::string(buf.data(), ptr);
}

std::string metadata_line(const CsvMeta& meta) {
  std::array<char, 32> hex{};
  std::snprintf(hex.data(), hex.size(), "%016llx", static_cast<unsigned long long>(meta.config_hash));
  return std::string("# amc ") + AMC_VERSION + " config_hash=" + hex.data() +
         " seed=" + std::to_string(meta.seed) + " prng=" + std::string(Xoshiro256::kName);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, const CsvMeta& meta,
                     int significant) {
  auto num = [&](double v) { return format_number(v, significant); };
  out << metadata_line(meta) << '\n' << kSweepColumns << '\n';
  for (const auto& r : rows) {
    out << to_string(r.scenario) << ',' << param_name(r.scenario) << ',' << num(r.param_value)
        << ',' << to_string(r.arch) << ',' << r.knowledge << ',' << num(r.kd) << ','
        << (r.kd_new ? num(*r.kd_new) : std::string()) << ',' << num(r.threshold) << ','
        << num(r.stats0.mean) << ',' << num(r.stats0.variance) << ',' << num(r.stats1.mean)
        << ',' << num(r.stats1.variance) << ',' << num(r.bep_analytic) << ',';
    if (r.oracle) {
      out << num(r.oracle->bep) << ',' << num(r.oracle->std_error) << ',' << std::to_string(r.oracle->trials);
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

}  // namespace amc
