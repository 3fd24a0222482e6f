#include "amc/receptor.hpp"

#include <cmath>
#include <type_traits>

#include "amc/errors.hpp"

namespace amc {

namespace {

// Bound and unbound fractions from separate quotients so that neither
// inherits the cancellation of 1 - p.
struct Occupancy {
  double bound;
  double unbound;
};

Occupancy split(double c, double kd) {
  const double total = c + kd;
  return {c / total, kd / total};
}

void check_concentration(double c) {
  if (!(c >= 0.0)) throw DomainError("binding: concentration must be >= 0");
}

void check_kd(double kd) {
  if (!(kd > 0.0) || !std::isfinite(kd)) throw DomainError("binding: K_D must be > 0");
}

}  // namespace

void validate(const Receptors& receptors) {
  std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if (r.count < 1) throw DomainError("receptor count N_R must be >= 1");
        if constexpr (std::is_same_v<T, ReceptorConfig>) {
          check_kd(r.kd);
        } else {
          check_kd(r.kd_new);
          check_kd(r.kd_base);
          if (!(r.alpha >= 0.0 && r.alpha <= 1.0)) {
            throw DomainError("mixture alpha must be in [0, 1]");
          }
        }
      },
      receptors);
}

int receptor_count(const Receptors& receptors) {
  return std::visit([](const auto& r) { return r.count; }, receptors);
}

double bind_prob(double c, double kd) {
  check_concentration(c);
  check_kd(kd);
  return c / (c + kd);
}

double mixture_bind_prob(double c, const MixtureConfig& cfg) {
  return cfg.alpha * bind_prob(c, cfg.kd_new) + (1.0 - cfg.alpha) * bind_prob(c, cfg.kd_base);
}

double occupancy(double c, const Receptors& receptors) {
  if (const auto* single = std::get_if<ReceptorConfig>(&receptors)) {
    return bind_prob(c, single->kd);
  }
  return mixture_bind_prob(c, std::get<MixtureConfig>(receptors));
}

BindingStats binding_stats(double c, const Receptors& receptors) {
  check_concentration(c);
  if (const auto* single = std::get_if<ReceptorConfig>(&receptors)) {
    check_kd(single->kd);
    const auto [p, q] = split(c, single->kd);
    const double n = single->count;
    return {n * p, n * p * q};
  }
  const auto& mix = std::get<MixtureConfig>(receptors);
  check_kd(mix.kd_new);
  check_kd(mix.kd_base);
  const auto [pa, qa] = split(c, mix.kd_new);
  const auto [pb, qb] = split(c, mix.kd_base);
  const double na = mix.new_count();
  const double nb = mix.base_count();
  return {na * pa + nb * pb, na * pa * qa + nb * pb * qb};
}

BindingStats binding_stats_with_interference(double c_star, const LognormalSpec& dist,
                                             const Receptors& receptors,
                                             const QuadratureConfig& cfg) {
  if (dist.degenerate()) return binding_stats(c_star + dist.mean(), receptors);

  // Mean occupancy measured from its value at the average concentration.
  // The difference is formed analytically, so small spreads are not lost to
  // rounding of two nearly equal counts.
  const double mu = dist.mean();
  const double c_ref = c_star + mu;
  const auto shift = [&](double c_int) {
    return std::visit(
        [&](const auto& r) {
          using T = std::decay_t<decltype(r)>;
          auto term = [&](double n, double kd) {
            return n * kd * (c_int - mu) / ((c_star + c_int + kd) * (c_ref + kd));
          };
          if constexpr (std::is_same_v<T, ReceptorConfig>) {
            return term(r.count, r.kd);
          } else {
            return term(r.new_count(), r.kd_new) + term(r.base_count(), r.kd_base);
          }
        },
        receptors);
  };
  const double mean_shift = lognormal_expectation(shift, dist, cfg);
  const double mean = binding_stats(c_ref, receptors).mean + mean_shift;
  const double expected_variance = lognormal_expectation(
      [&](double c_int) { return binding_stats(c_star + c_int, receptors).variance; },
      dist, cfg);
  // Second pass around the mean avoids E[m^2] - E[m]^2 cancellation.
  const double variance_of_mean = lognormal_expectation(
      [&](double c_int) {
        const double dev = shift(c_int) - mean_shift;
        return dev * dev;
      },
      dist, cfg);
  return {mean, expected_variance + variance_of_mean};
}

}  // namespace amc
