#include "amc/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace amc {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr std::int64_t kLogFactorialTable = 1 << 14;

const std::vector<double>& log_factorials() {
  static const std::vector<double> table = [] {
    std::vector<double> t(static_cast<std::size_t>(kLogFactorialTable) + 1);
    t[0] = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) t[k] = t[k - 1] + std::log(static_cast<double>(k));
    return t;
  }();
  return table;
}

double log_factorial(std::int64_t k) {
  if (k <= kLogFactorialTable) return log_factorials()[static_cast<std::size_t>(k)];
  return std::lgamma(static_cast<double>(k) + 1.0);
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  std::uint64_t mixed = splitmix64(state) ^ index;
  return splitmix64(mixed);
}

Xoshiro256::Xoshiro256(std::uint64_t key) {
  std::uint64_t state = key;
  for (auto& word : s_) word = splitmix64(state);
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Xoshiro256::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::int64_t binomial(Xoshiro256& rng, std::int64_t n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const bool flip = p > 0.5;
  const double pp = flip ? 1.0 - p : p;
  const double odds = pp / (1.0 - pp);

  std::int64_t mode = static_cast<std::int64_t>(std::floor(static_cast<double>(n + 1) * pp));
  if (mode > n) mode = n;
  const double f_mode =
      std::exp(log_factorial(n) - log_factorial(mode) - log_factorial(n - mode) +
               static_cast<double>(mode) * std::log(pp) +
               static_cast<double>(n - mode) * std::log1p(-pp));

  double u = rng.uniform() - f_mode;
  std::int64_t k = mode;
  std::int64_t lo = mode;
  std::int64_t hi = mode;
  double f_lo = f_mode;
  double f_hi = f_mode;
  while (u > 0.0) {
    const bool down = lo > 0;
    const bool up = hi < n;
    if (!down && !up) break;  // rounding leftover: keep the mode
    if (down) {
      f_lo *= static_cast<double>(lo) / (static_cast<double>(n - lo + 1) * odds);
      --lo;
      u -= f_lo;
      if (u <= 0.0) {
        k = lo;
        break;
      }
    }
    if (up) {
      f_hi *= static_cast<double>(n - hi) * odds / static_cast<double>(hi + 1);
      ++hi;
      u -= f_hi;
      if (u <= 0.0) {
        k = hi;
        break;
      }
    }
  }
  return flip ? n - k : k;
}

}  // namespace amc
