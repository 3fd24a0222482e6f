#pragma once

#include "amc/receptor.hpp"

namespace amc {

/// Per-bit statistics together with the threshold applied to them.
struct DecisionModel {
  BindingStats stats0;
  BindingStats stats1;
  double threshold = 0.0;
};

/// Threshold on n_B minimizing the error probability between two Gaussian
/// hypotheses with equal priors (stats1 is the larger-mean hypothesis).
/// Falls back to the equal-variance limit when |Var1 - Var0| is below
/// 1e-9 of the larger variance. Throws DegenerateStats if a variance <= 0.
double optimal_threshold(const BindingStats& stats0, const BindingStats& stats1);

/// 1/4 erfc((lambda - E0)/sqrt(2 Var0)) + 1/4 erfc((E1 - lambda)/sqrt(2 Var1)).
double bep(const BindingStats& stats0, const BindingStats& stats1, double threshold);

/// Prior-weighted form p0 P(1|0) + p1 P(0|1); equals bep() at p1 = 1/2.
double bep_with_prior(const BindingStats& stats0, const BindingStats& stats1,
                      double threshold, double p1);

DecisionModel make_decision_model(const BindingStats& stats0, const BindingStats& stats1);

/// Bit 1 when n_B >= threshold (ties decide 1).
inline int decide(double bound_count, double threshold) {
  return bound_count >= threshold ? 1 : 0;
}

}  // namespace amc
