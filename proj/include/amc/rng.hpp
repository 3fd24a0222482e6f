#pragma once

#include <cstdint>
#include <string_view>

namespace amc {

/// Bijective mix of (seed, index) into an independent stream key.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

/// xoshiro256** seeded from a 64-bit key through splitmix64.
class Xoshiro256 {
 public:
  static constexpr std::string_view kName = "xoshiro256**/splitmix64";

  explicit Xoshiro256(std::uint64_t key);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by Box-Muller; the second variate is cached.
  double normal();

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Exact Binomial(n, p) draw by inversion searched outward from the mode.
std::int64_t binomial(Xoshiro256& rng, std::int64_t n, double p);

}  // namespace amc
