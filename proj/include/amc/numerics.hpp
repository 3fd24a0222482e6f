#pragma once

#include <functional>

namespace amc {

/// Complementary error function, 2/sqrt(pi) * int_x^inf exp(-y^2) dy.
///
/// Power series for |x| <= 2 and a Lentz-evaluated continued fraction
/// beyond, so the result keeps full relative precision deep into the
/// tail (down to the smallest subnormal near x = 27.2).
double erfc(double x);

/// Lognormal distribution described by its (linear-space) mean and
/// standard deviation; the log-space parameters are moment-matched.
class LognormalSpec {
public:
  /// Throws DomainError unless mean > 0 and std_dev >= 0.
  LognormalSpec(double mean, double std_dev);

  [[nodiscard]] double mean() const noexcept { return mean_; }
  [[nodiscard]] double std_dev() const noexcept { return std_dev_; }
  [[nodiscard]] double mu_log() const noexcept { return mu_log_; }
  [[nodiscard]] double sigma_log() const noexcept { return sigma_log_; }
  /// std_dev == 0: a point mass at mean().
  [[nodiscard]] bool degenerate() const noexcept { return std_dev_ == 0.0; }

private:
  double mean_;
  double std_dev_;
  double mu_log_;
  double sigma_log_;
};

struct QuadratureConfig {
  int node_count = 16;  ///< starting Gauss-Hermite rule size
  double relative_tolerance = 1e-10;

  /// Throws ConfigError on node_count < 8 or tolerance outside (0, 1e-3].
  void validate() const;
};

/// Largest Gauss-Hermite rule the adaptive doubling will try.
inline constexpr int kMaxHermiteNodes = 512;

/// E[f(C)] for C ~ lognormal(dist). Gauss-Hermite in the log variable,
/// doubling the node count until two successive estimates agree within
/// cfg.relative_tolerance. Degenerate distributions return f(mean) exactly.
/// Throws NonConvergence when kMaxHermiteNodes is exhausted.
double lognormal_expectation(const std::function<double(double)>& f,
                             const LognormalSpec& dist,
                             const QuadratureConfig& cfg = {});

struct ScalarMinimum {
  double argmin;
  double value;
};

/// Golden-section search on [lo, hi] finished with one parabolic step.
/// Assumes f is unimodal on the bracket. Stops once the bracket is
/// narrower than tol * |x|. Throws InvalidBracket if lo >= hi.
ScalarMinimum minimize_scalar(const std::function<double(double)>& f,
                              double lo, double hi, double tol);

}  // namespace amc
