#include "amc/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "amc/errors.hpp"
#include "amc/numerics.hpp"

namespace amc {

namespace {

void check_variances(const BindingStats& stats0, const BindingStats& stats1) {
  if (!(stats0.variance > 0.0) || !(stats1.variance > 0.0)) {
    throw DegenerateStats("detection requires strictly positive variances");
  }
}

}  // namespace

double optimal_threshold(const BindingStats& stats0, const BindingStats& stats1) {
  check_variances(stats0, stats1);
  const double v0 = stats0.variance;
  const double v1 = stats1.variance;
  const double delta = stats1.mean - stats0.mean;
  const double gamma = v1 - v0;
  const double log_ratio = std::log(v1 / v0);  // 2 ln(Std1/Std0)

  if (std::abs(gamma) < 1e-9 * std::max(v0, v1)) {
    if (delta == 0.0) return stats0.mean;
    const double pooled = 0.5 * (v0 + v1);
    return 0.5 * (stats0.mean + stats1.mean) + pooled * log_ratio / (2.0 * delta);
  }

  // Closed form (V1 E0 - V0 E1 + s0 s1 S) / Gamma with
  // S = sqrt(delta^2 + Gamma ln(V1/V0)), rationalized so nothing is
  // divided by Gamma: lambda - E0 = V0 (delta^2 + V1 L) / (s0 s1 S + V0 delta).
  const double s = std::sqrt(delta * delta + gamma * log_ratio);
  const double s0s1 = std::sqrt(v0 * v1);
  const double den = s0s1 * s + v0 * delta;
  if (den == 0.0) return stats0.mean;
  return stats0.mean + v0 * (delta * delta + v1 * log_ratio) / den;
}

double bep(const BindingStats& stats0, const BindingStats& stats1, double threshold) {
  return bep_with_prior(stats0, stats1, threshold, 0.5);
}

double bep_with_prior(const BindingStats& stats0, const BindingStats& stats1,
                      double threshold, double p1) {
  check_variances(stats0, stats1);
  const double false_alarm =
      0.5 * erfc((threshold - stats0.mean) / std::sqrt(2.0 * stats0.variance));
  const double miss =
      0.5 * erfc((stats1.mean - threshold) / std::sqrt(2.0 * stats1.variance));
  return (1.0 - p1) * false_alarm + p1 * miss;
}

DecisionModel make_decision_model(const BindingStats& stats0, const BindingStats& stats1) {
  return {stats0, stats1, optimal_threshold(stats0, stats1)};
}

}  // namespace amc
