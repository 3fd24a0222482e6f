#include "amc/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "amc/errors.hpp"

namespace amc {

void ChannelParams::validate() const {
  if (!(diffusion > 0.0)) throw ValidationError("D > 0");
  if (!(distance > 0.0)) throw ValidationError("d > 0");
  if (!(n0 >= 0.0)) throw ValidationError("N0 >= 0");
  if (!(n1 > n0)) throw ValidationError("N1 > N0");
  if (!(p1 > 0.0 && p1 < 1.0)) throw ValidationError("p1 in (0,1)");
  if (!(beta >= 0.0)) throw ValidationError("beta >= 0");
  if (!(ts_factor > 0.0)) throw ValidationError("Ts_factor > 0");
  if (memory_length < 0) throw ValidationError("I >= 0");
  if (!(c_int_const >= 0.0)) throw ValidationError("c_int_const >= 0");
  if (sampling_time && !(*sampling_time > 0.0)) throw ValidationError("t_S > 0");
}

double ChannelParams::t_peak() const { return peak_time(distance, diffusion); }

double ChannelParams::t_sample() const { return sampling_time.value_or(t_peak()); }

double ChannelParams::symbol_interval() const { return ts_factor * t_peak(); }

double cir(double t, double d, double D) {
  if (!(t > 0.0)) throw DomainError("cir: t must be > 0");
  const double spread = 4.0 * std::numbers::pi * D * t;
  return std::exp(-d * d / (4.0 * D * t)) / (spread * std::sqrt(spread));
}

double peak_time(double d, double D) { return d * d / (6.0 * D); }

double cir_enzyme(double t, double d, double D, double beta) {
  const double h = cir(t, d, D);
  if (beta == 0.0) return h;
  return h * std::exp(-beta * t);
}

double received_concentration(int bit, const ChannelParams& params, double t_s) {
  return params.molecules(bit) *
             cir_enzyme(t_s, params.distance, params.diffusion, params.beta) +
         params.c_int_const;
}

std::vector<double> isi_taps(const ChannelParams& params, double t_s) {
  const double ts = params.symbol_interval();
  std::vector<double> taps(static_cast<std::size_t>(params.memory_length));
  for (std::size_t k = 0; k < taps.size(); ++k) {
    taps[k] = cir_enzyme(t_s + static_cast<double>(k + 1) * ts, params.distance,
                         params.diffusion, params.beta);
  }
  return taps;
}

double isi_term(std::span<const std::uint8_t> history, const ChannelParams& params,
                double t_s) {
  return isi_term(history, params, isi_taps(params, t_s));
}

double isi_term(std::span<const std::uint8_t> history, const ChannelParams& params,
                std::span<const double> taps) {
  if (history.size() != taps.size()) {
    throw LengthMismatch("isi_term: history length " + std::to_string(history.size()) +
                         " != I = " + std::to_string(taps.size()));
  }
  double omega = 0.0;
  const std::size_t n = history.size();
  for (std::size_t k = 1; k <= n; ++k) {
    omega += params.molecules(history[n - k]) * taps[k - 1];
  }
  return omega;
}

double isi_estimate(std::span<const std::uint8_t> decoded, const ChannelParams& params,
                    double t_s) {
  return isi_estimate(decoded, params, isi_taps(params, t_s));
}

double isi_estimate(std::span<const std::uint8_t> decoded, const ChannelParams& params,
                    std::span<const double> taps) {
  if (decoded.size() > taps.size()) {
    throw LengthMismatch("isi_estimate: memory M = " + std::to_string(decoded.size()) +
                         " exceeds I = " + std::to_string(taps.size()));
  }
  const std::size_t m = decoded.size();
  double omega = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    omega += params.molecules(decoded[m - k]) * taps[k - 1];
  }
  double tail = 0.0;
  for (std::size_t k = m; k < taps.size(); ++k) tail += taps[k];
  return omega + params.mean_molecules() * tail;
}

}  // namespace amc
