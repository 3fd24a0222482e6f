#include "amc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "amc/errors.hpp"

namespace amc {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kTwoOverSqrtPi = 1.1283791670955125739;

// exp(-x^2) with x^2 split as xh^2 + (x - xh)(x + xh); xh has few enough
// bits that xh^2 is exact, which keeps the tail relative error small.
double exp_neg_square(double x) {
  const double xh = std::floor(x * 16.0) / 16.0;
  const double del = (x - xh) * (x + xh);
  return std::exp(-xh * xh) * std::exp(-del);
}

// erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (2n+1)!!
// All terms positive; used for 0 <= x <= 2.
double erf_series(double x) {
  const double x2 = 2.0 * x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return kTwoOverSqrtPi * exp_neg_square(x) * sum;
}

// erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated with the modified Lentz algorithm; x >= 2.
double erfc_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int n = 1; n < 5000; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return exp_neg_square(x) / (kSqrtPi * f);
}

struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Orthonormal Hermite function of order n at z, and its derivative
// factor sqrt(2n) * psi_{n-1}(z). Bounded for every z, unlike the bare
// polynomials, which overflow near the outer nodes of large rules.
std::pair<double, double> hermite_function(int n, double z) {
  constexpr double pim4 = 0.7511255444649425;  // pi^(-1/4)
  double p1 = pim4 * std::exp(-0.5 * z * z);
  double p2 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double p3 = p2;
    p2 = p1;
    p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(j / (j + 1.0)) * p3;
  }
  return {p1, std::sqrt(2.0 * n) * p2};
}

// Physicists' Gauss-Hermite rule. Positive roots are bracketed by sign
// changes on a grid finer than the smallest root spacing and then bisected.
HermiteRule make_hermite_rule(int n) {
  HermiteRule rule;
  rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);
  auto weight_at = [n](double z) {
    const double pp = hermite_function(n, z).second;
    return 2.0 * std::exp(-z * z - 2.0 * std::log(std::abs(pp)));
  };

  std::vector<double> roots;
  const double reach = std::sqrt(2.0 * n + 1.0) + 1.0;
  const double step = 0.05 * std::numbers::pi / std::sqrt(2.0 * n + 1.0);
  double a = 0.5 * step;
  double fa = hermite_function(n, a).first;
  while (a < reach && static_cast<int>(roots.size()) < n / 2) {
    const double b = a + step;
    const double fb = hermite_function(n, b).first;
    if ((fa < 0.0) != (fb < 0.0)) {
      double lo = a;
      double hi = b;
      const bool rising = fa < 0.0;
      while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        ((hermite_function(n, mid).first < 0.0) == rising ? lo : hi) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  if (static_cast<int>(roots.size()) != n / 2) {
    throw NonConvergence("Gauss-Hermite rule: found " + std::to_string(roots.size()) +
                         " of " + std::to_string(n / 2) + " positive roots");
  }

  const auto half = static_cast<std::size_t>(n / 2);
  for (std::size_t i = 0; i < half; ++i) {
    const double z = roots[half - 1 - i];  // descending, so nodes run high to low
    rule.nodes[i] = z;
    rule.nodes[static_cast<std::size_t>(n) - 1 - i] = -z;
    rule.weights[i] = weight_at(z);
    rule.weights[static_cast<std::size_t>(n) - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) rule.weights[half] = weight_at(0.0);
  return rule;
}

const HermiteRule& hermite_rule(int n) {
  static std::mutex mutex;
  static std::map<int, HermiteRule> cache;
  const std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_hermite_rule(n)).first;
  return it->second;
}

}  // namespace

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x <= 2.0) return 1.0 - erf_series(x);
  // Below the smallest subnormal from here on.
  if (x >= 27.3) return 0.0;
  return erfc_continued_fraction(x);
}

LognormalSpec::LognormalSpec(double mean, double std_dev)
    : mean_(mean), std_dev_(std_dev) {
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw DomainError("lognormal mean must be > 0");
  }
  if (!(std_dev >= 0.0) || !std::isfinite(std_dev)) {
    throw DomainError("lognormal std_dev must be >= 0");
  }
  const double cv = std_dev / mean;
  const double s2 = std::log1p(cv * cv);
  sigma_log_ = std::sqrt(s2);
  mu_log_ = std::log(mean) - 0.5 * s2;
}

void QuadratureConfig::validate() const {
  if (node_count < 8) throw ConfigError("quadrature node_count must be >= 8");
  if (node_count > kMaxHermiteNodes) {
    throw ConfigError("quadrature node_count must be <= " +
                      std::to_string(kMaxHermiteNodes));
  }
  if (!(relative_tolerance > 0.0 && relative_tolerance <= 1e-3)) {
    throw ConfigError("quadrature relative_tolerance must be in (0, 1e-3]");
  }
}

double lognormal_expectation(const std::function<double(double)>& f,
                             const LognormalSpec& dist,
                             const QuadratureConfig& cfg) {
  cfg.validate();
  if (dist.degenerate()) return f(dist.mean());

  const double scale = std::numbers::sqrt2 * dist.sigma_log();
  auto apply_rule = [&](int n, double& magnitude) {
    const auto& rule = hermite_rule(n);
    double sum = 0.0;
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      if (rule.weights[i] == 0.0) continue;
      const double v = f(std::exp(dist.mu_log() + scale * rule.nodes[i]));
      sum += rule.weights[i] * v;
      abs_sum += rule.weights[i] * std::abs(v);
    }
    magnitude = abs_sum / kSqrtPi;
    return sum / kSqrtPi;
  };

  double magnitude = 0.0;
  int n = cfg.node_count;
  double previous = apply_rule(n, magnitude);
  while (2 * n <= kMaxHermiteNodes) {
    n *= 2;
    const double current = apply_rule(n, magnitude);
    // Rounding floor: nothing below eps * E|f| is resolvable.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * magnitude;
    if (std::abs(current - previous) <=
        cfg.relative_tolerance * std::abs(current) + floor) {
      return current;
    }
    previous = current;
  }
  throw NonConvergence("lognormal_expectation: no agreement within " +
                       std::to_string(kMaxHermiteNodes) + " nodes");
}

ScalarMinimum minimize_scalar(const std::function<double(double)>& f,
                              double lo, double hi, double tol) {
  if (!(lo < hi)) throw InvalidBracket("minimize_scalar: lo must be < hi");
  const double inv_phi = std::numbers::phi - 1.0;

  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 400; ++it) {
    const double width = b - a;
    if (width <= tol * std::abs(0.5 * (a + b))) break;
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
    if (!(b - a < width)) break;  // no further progress in floating point
  }

  ScalarMinimum best = f1 <= f2 ? ScalarMinimum{x1, f1} : ScalarMinimum{x2, f2};

  // One parabolic step through the final bracket and its best interior point.
  const double fa = f(a);
  const double fb = f(b);
  if (fa < best.value) best = {a, fa};
  if (fb < best.value) best = {b, fb};
  const double xm = best.argmin;
  const double fm = best.value;
  const double num = (xm - a) * (xm - a) * (fm - fb) - (xm - b) * (xm - b) * (fm - fa);
  const double den = (xm - a) * (fm - fb) - (xm - b) * (fm - fa);
  if (den != 0.0 && std::isfinite(num / den)) {
    const double u = xm - 0.5 * num / den;
    if (u > a && u < b) {
      const double fu = f(u);
      if (fu < best.value) best = {u, fu};
    }
  }
  return best;
}

}  // namespace amc
