#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace amc {

/// Physical link description. Lengths in um, time in s, concentrations
/// in molecules per um^3.
struct ChannelParams {
  double diffusion = 100.0;     ///< D, um^2/s
  double distance = 50.0;       ///< d, um
  double n1 = 5e8;              ///< molecules released for bit 1
  double n0 = 5e8 / 50.0;       ///< molecules released for bit 0
  double p1 = 0.5;              ///< prior of bit 1
  double beta = 0.0;            ///< enzymatic degradation rate, 1/s
  double ts_factor = 4.0;       ///< signaling interval T_S in units of t_Peak
  int memory_length = 30;       ///< channel memory I, symbols
  double c_int_const = 0.0;     ///< deterministic interference concentration
  std::optional<double> sampling_time;  ///< t_S override; t_Peak when empty

  /// Throws ValidationError naming the violated invariant.
  void validate() const;

  [[nodiscard]] double molecules(int bit) const { return bit != 0 ? n1 : n0; }
  [[nodiscard]] double p0() const { return 1.0 - p1; }
  [[nodiscard]] double mean_molecules() const { return p0() * n0 + p1 * n1; }
  [[nodiscard]] double t_peak() const;
  [[nodiscard]] double t_sample() const;
  [[nodiscard]] double symbol_interval() const;
};

/// Bits, oldest first and most recent last.
using BitSequence = std::vector<std::uint8_t>;

/// Free-diffusion impulse response (4 pi D t)^(-3/2) exp(-d^2 / 4Dt).
/// Throws DomainError when t <= 0.
double cir(double t, double d, double D);

/// d^2 / (6 D), the maximizer of cir over t.
double peak_time(double d, double D);

/// cir(t, d, D) * exp(-beta t).
double cir_enzyme(double t, double d, double D, double beta);

/// N_{L|bit} * cir_enzyme(t_s) + c_int_const.
double received_concentration(int bit, const ChannelParams& params, double t_s);

/// Tap k (1-based) is the concentration per molecule released k symbols
/// before the current one: cir_enzyme(t_s + k T_S).
std::vector<double> isi_taps(const ChannelParams& params, double t_s);

/// Exact ISI from the last I symbols; history.size() must equal I.
double isi_term(std::span<const std::uint8_t> history, const ChannelParams& params,
                double t_s);
double isi_term(std::span<const std::uint8_t> history, const ChannelParams& params,
                std::span<const double> taps);

/// Memory-based ISI estimate: the M remembered bits contribute exactly,
/// the older I - M symbols contribute their prior mean.
double isi_estimate(std::span<const std::uint8_t> decoded, const ChannelParams& params,
                    double t_s);
double isi_estimate(std::span<const std::uint8_t> decoded, const ChannelParams& params,
                    std::span<const double> taps);

}  // namespace amc
