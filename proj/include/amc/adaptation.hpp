#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "amc/detection.hpp"
#include "amc/numerics.hpp"
#include "amc/receptor.hpp"

namespace amc {

enum class Architecture { Nar, Rtar, Rear };

std::string_view to_string(Architecture arch);
/// Accepts NAR/RTAR/REAR in any letter case; nullopt otherwise.
std::optional<Architecture> parse_architecture(std::string_view text);

/// A receiver and the receptors it currently exposes. NAR always keeps
/// the baseline K_D; REAR's base population always keeps it too.
struct ReceiverArchitecture {
  Architecture kind = Architecture::Nar;
  double baseline_kd = 1.0;
  Receptors current = ReceptorConfig{};
};

/// Received levels for bit 0 and bit 1, optionally shifted by a common
/// lognormal interference concentration.
struct SignalModel {
  double c0 = 0.0;
  double c1 = 0.0;
  std::optional<LognormalSpec> interference;
  double p1 = 0.5;
};

BindingStats model_stats(const SignalModel& model, int bit, const Receptors& receptors,
                         const QuadratureConfig& quadrature = {});

/// Stats, optimal threshold and BEP of a receiver facing `model`.
DecisionModel model_decision(const SignalModel& model, const Receptors& receptors,
                             const QuadratureConfig& quadrature = {});
double analytic_bep(const SignalModel& model, const Receptors& receptors,
                    const QuadratureConfig& quadrature = {});

double kd_opt_baseline(double c0, double c1);
double kd_opt_scaled(double gamma, double baseline_kd);
double kd_opt_shift(double delta, double c0_star, double c1_star);
double kd_opt_isi(double omega0, double c0_star, double c1_star);
double kd_opt_interference_mean(double mu, double c0_star, double c1_star);

/// Search window and tolerance for numerical K_D optimization, in log10 K_D
/// around the baseline. A coarse scan picks the basin before the
/// golden-section refinement.
struct KdSearch {
  double decades = 4.0;
  double tol = 1e-6;
  int scan_points = 81;
};

struct KdOptimum {
  double kd;
  double bep;
};

/// argmin over a single population's K_D of the BEP under `model`, using
/// full interference statistics when present. The first-moment setting
/// and the baseline are always candidates, so the result never loses to them.
KdOptimum optimize_kd_rtar_full_stats(const SignalModel& model, int receptor_count,
                                      double baseline_kd,
                                      const QuadratureConfig& quadrature = {},
                                      const KdSearch& search = {},
                                      const std::vector<double>& extra_anchors = {});

/// argmin over K_D_new of the mixture BEP with K_D_base = baseline.
/// K_D_new = baseline reproduces the non-adaptive response and is always a
/// candidate, so the result never loses to NAR.
KdOptimum optimize_kd_new_rear(const SignalModel& model, int receptor_count,
                               double baseline_kd, double alpha = 0.5,
                               const QuadratureConfig& quadrature = {},
                               const KdSearch& search = {},
                               const std::vector<double>& extra_anchors = {});

}  // namespace amc
