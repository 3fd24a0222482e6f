#include <doctest.h>

#include <cmath>
#include <random>

#include "amc/errors.hpp"
#include "amc/receptor.hpp"

using namespace amc;

TEST_SUITE("receptor") {
  TEST_CASE("binding probability") {
    CHECK(bind_prob(41.65, 41.65) == 0.5);
    CHECK(bind_prob(0.0, 3.0) == 0.0);
    CHECK(bind_prob(9.0, 1.0) == doctest::Approx(0.9));
    CHECK_THROWS_AS(bind_prob(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(bind_prob(1.0, 0.0), DomainError);
  }

  TEST_CASE("equal mixture collapses to a single population") {
    const MixtureConfig mix{41.65, 41.65, 0.5, 1000};
    const ReceptorConfig one{41.65, 1000};
    for (double c : {0.1, 5.9, 41.65, 294.0, 1e4}) {
      CHECK(mixture_bind_prob(c, mix) == doctest::Approx(bind_prob(c, 41.65)).epsilon(1e-15));
      const auto a = binding_stats(c, mix);
      const auto b = binding_stats(c, one);
      CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-15));
      CHECK(a.variance == doctest::Approx(b.variance).epsilon(1e-15));
    }
  }

  TEST_CASE("binomial statistics") {
    const auto s = binding_stats(30.0, ReceptorConfig{10.0, 1000});
    CHECK(s.mean == doctest::Approx(750.0));
    CHECK(s.variance == doctest::Approx(187.5));
  }

  TEST_CASE("mixture statistics agree with sampling") {
    const MixtureConfig mix{4165.0, 41.65, 0.5, 1000};
    const double c = 300.0;
    std::mt19937_64 gen(11);
    std::binomial_distribution<int> a(500, c / (c + mix.kd_new));
    std::binomial_distribution<int> b(500, c / (c + mix.kd_base));
    double sum = 0.0;
    double sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double v = a(gen) + b(gen);
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const auto s = binding_stats(c, mix);
    CHECK(std::abs(s.mean - mean) < 5.0 * std::sqrt(var / n));
    CHECK(s.variance == doctest::Approx(var).epsilon(0.02));
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(validate(ReceptorConfig{1.0, 0}), DomainError);
    CHECK_THROWS_AS(validate(MixtureConfig{1.0, 1.0, 1.5, 10}), DomainError);
    CHECK_THROWS_AS(validate(MixtureConfig{-1.0, 1.0, 0.5, 10}), DomainError);
    CHECK_NOTHROW(validate(MixtureConfig{1.0, 2.0, 0.5, 10}));
  }

  TEST_CASE("degenerate interference is a deterministic shift") {
    const ReceptorConfig r{41.6, 1000};
    const auto a = binding_stats_with_interference(5.9, LognormalSpec(20.0, 0.0), r);
    const auto b = binding_stats(25.9, r);
    CHECK(a == b);
  }

  TEST_CASE("interference statistics agree with two-stage sampling") {
    const ReceptorConfig r{80.0, 1000};
    const LognormalSpec d(40.0, 4.0);
    const double cstar = 5.9;
    std::mt19937_64 gen(3);
    std::normal_distribution<double> z(0.0, 1.0);
    double sum = 0.0;
    double sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double c = cstar + std::exp(d.mu_log() + d.sigma_log() * z(gen));
      std::binomial_distribution<int> nb(1000, c / (c + 80.0));
      const double v = nb(gen);
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const auto s = binding_stats_with_interference(cstar, d, r);
    CHECK(std::abs(s.mean - mean) < 5.0 * std::sqrt(var / n));
    CHECK(s.variance == doctest::Approx(var).epsilon(0.02));
    // Spread of the interference adds variance beyond the binomial part.
    CHECK(s.variance > binding_stats(cstar + 40.0, r).variance);
  }
}
