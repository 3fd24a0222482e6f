#pragma once

#include <variant>

#include "amc/numerics.hpp"

namespace amc {

/// Single receptor population.
struct ReceptorConfig {
  double kd = 1.0;     ///< dissociation constant, molecules/um^3
  int count = 1000;    ///< N_R
};

/// Two independent populations sharing N_R receptors: a fraction alpha with
/// kd_new and the remainder with kd_base.
struct MixtureConfig {
  double kd_new = 1.0;
  double kd_base = 1.0;
  double alpha = 0.5;
  int count = 1000;

  [[nodiscard]] double new_count() const { return alpha * count; }
  [[nodiscard]] double base_count() const { return (1.0 - alpha) * count; }
};

using Receptors = std::variant<ReceptorConfig, MixtureConfig>;

/// Throws DomainError for non-positive K_D, N_R < 1 or alpha outside [0, 1].
void validate(const Receptors& receptors);
int receptor_count(const Receptors& receptors);

/// Mean and variance of the bound-receptor count for one transmitted bit.
struct BindingStats {
  double mean = 0.0;
  double variance = 0.0;

  friend bool operator==(const BindingStats&, const BindingStats&) = default;
};

/// c / (c + K_D). Throws DomainError when c < 0 or K_D <= 0.
double bind_prob(double c, double kd);

/// alpha c/(c + K_new) + (1 - alpha) c/(c + K_base).
double mixture_bind_prob(double c, const MixtureConfig& cfg);

/// Expected fraction of bound receptors for either population layout.
double occupancy(double c, const Receptors& receptors);

/// Binomial statistics at concentration c; a mixture is the sum of two
/// independent binomials of sizes alpha N_R and (1 - alpha) N_R.
BindingStats binding_stats(double c, const Receptors& receptors);

/// Statistics when a lognormal interference concentration adds to c_star:
/// total expectation for the mean and total variance for the variance.
BindingStats binding_stats_with_interference(double c_star, const LognormalSpec& dist,
                                             const Receptors& receptors,
                                             const QuadratureConfig& cfg = {});

}  // namespace amc
