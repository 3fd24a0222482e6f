#include "amc/adaptation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "amc/errors.hpp"

namespace amc {

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be > 0");
}

void check_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be >= 0");
}

// Coarse log-grid scan, golden-section refinement inside the best cell,
// then the caller's anchors. Objective maps log10 K_D to BEP.
template <typename Objective>
KdOptimum search_log_kd(Objective&& objective, double baseline_kd, const KdSearch& search,
                        std::vector<double> anchors) {
  const double centre = std::log10(baseline_kd);
  const double lo = centre - search.decades;
  const double hi = centre + search.decades;
  const int n = std::max(search.scan_points, 3);

  std::vector<double> grid(static_cast<std::size_t>(n));
  std::vector<double> values(grid.size());
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    grid[ui] = (lo * (n - 1 - i) + hi * i) / (n - 1);
    values[ui] = objective(grid[ui]);
  }
  const auto best = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  const double a = grid[best == 0 ? 0 : best - 1];
  const double b = grid[std::min(best + 1, grid.size() - 1)];

  auto fn = [&](double x) { return objective(x); };
  ScalarMinimum found = minimize_scalar(fn, a, b, search.tol);
  if (values[best] < found.value) found = {grid[best], values[best]};

  KdOptimum result{std::pow(10.0, found.argmin), found.value};
  for (const double kd : anchors) {
    const double v = objective(std::log10(kd));
    if (v <= result.bep) result = {kd, v};
  }
  return result;
}

}  // namespace

std::string_view to_string(Architecture arch) {
  switch (arch) {
    case Architecture::Nar: return "NAR";
    case Architecture::Rtar: return "RTAR";
    case Architecture::Rear: return "REAR";
  }
  return "?";
}

std::optional<Architecture> parse_architecture(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  if (upper == "NAR") return Architecture::Nar;
  if (upper == "RTAR") return Architecture::Rtar;
  if (upper == "REAR") return Architecture::Rear;
  return std::nullopt;
}

BindingStats model_stats(const SignalModel& model, int bit, const Receptors& receptors,
                         const QuadratureConfig& quadrature) {
  const double c = bit != 0 ? model.c1 : model.c0;
  if (model.interference) {
    return binding_stats_with_interference(c, *model.interference, receptors, quadrature);
  }
  return binding_stats(c, receptors);
}

DecisionModel model_decision(const SignalModel& model, const Receptors& receptors,
                             const QuadratureConfig& quadrature) {
  return make_decision_model(model_stats(model, 0, receptors, quadrature),
                             model_stats(model, 1, receptors, quadrature));
}

double analytic_bep(const SignalModel& model, const Receptors& receptors,
                    const QuadratureConfig& quadrature) {
  const auto dm = model_decision(model, receptors, quadrature);
  return bep_with_prior(dm.stats0, dm.stats1, dm.threshold, model.p1);
}

double kd_opt_baseline(double c0, double c1) {
  check_positive(c0, "c0");
  check_positive(c1, "c1");
  return std::sqrt(c0 * c1);
}

double kd_opt_scaled(double gamma, double baseline_kd) {
  check_positive(gamma, "gamma");
  check_positive(baseline_kd, "baseline K_D");
  return gamma * baseline_kd;
}

double kd_opt_shift(double delta, double c0_star, double c1_star) {
  check_non_negative(delta, "shift");
  return kd_opt_baseline(c0_star + delta, c1_star + delta);
}

double kd_opt_isi(double omega0, double c0_star, double c1_star) {
  return kd_opt_shift(omega0, c0_star, c1_star);
}

double kd_opt_interference_mean(double mu, double c0_star, double c1_star) {
  return kd_opt_shift(mu, c0_star, c1_star);
}

KdOptimum optimize_kd_rtar_full_stats(const SignalModel& model, int receptor_count,
                                      double baseline_kd, const QuadratureConfig& quadrature,
                                      const KdSearch& search,
                                      const std::vector<double>& extra_anchors) {
  auto objective = [&](double log_kd) {
    const Receptors r = ReceptorConfig{std::pow(10.0, log_kd), receptor_count};
    return analytic_bep(model, r, quadrature);
  };
  const double first_moment =
      model.interference
          ? kd_opt_interference_mean(model.interference->mean(), model.c0, model.c1)
          : kd_opt_baseline(model.c0, model.c1);
  std::vector<double> anchors{first_moment, baseline_kd};
  anchors.insert(anchors.end(), extra_anchors.begin(), extra_anchors.end());
  return search_log_kd(objective, baseline_kd, search, std::move(anchors));
}

KdOptimum optimize_kd_new_rear(const SignalModel& model, int receptor_count,
                               double baseline_kd, double alpha,
                               const QuadratureConfig& quadrature, const KdSearch& search,
                               const std::vector<double>& extra_anchors) {
  auto objective = [&](double log_kd) {
    const Receptors r =
        MixtureConfig{std::pow(10.0, log_kd), baseline_kd, alpha, receptor_count};
    return analytic_bep(model, r, quadrature);
  };
  std::vector<double> anchors{baseline_kd};
  anchors.insert(anchors.end(), extra_anchors.begin(), extra_anchors.end());
  return search_log_kd(objective, baseline_kd, search, std::move(anchors));
}

}  // namespace amc
