#include <doctest.h>

#include <cmath>
#include <random>

#include "amc/errors.hpp"
#include "amc/numerics.hpp"

using namespace amc;

namespace {

// Maclaurin series of erf in long double, summed to 50 terms.
long double erf_maclaurin(long double x) {
  long double sum = 0.0L;
  long double term = x;
  for (int n = 0; n < 50; ++n) {
    sum += term / (2 * n + 1);
    term *= -x * x / (n + 1);
  }
  return 2.0L / std::sqrt(3.14159265358979323846264338327950288L) * sum;
}

}  // namespace

TEST_SUITE("numerics") {
  TEST_CASE("erfc matches an independent series near the origin") {
    for (double x : {0.0, 0.1, 0.5, 1.0, 1.5}) {
      const double ref = static_cast<double>(1.0L - erf_maclaurin(x));
      CHECK(amc::erfc(x) == doctest::Approx(ref).epsilon(1e-14));
    }
    CHECK(amc::erfc(1.0) == doctest::Approx(0.157299207050285).epsilon(1e-14));
    CHECK(amc::erfc(0.0) == 1.0);
  }

  TEST_CASE("erfc keeps relative precision in the tail") {
    for (double x = -6.0; x <= 26.0; x += 0.173) {
      const double ref = std::erfc(x);
      CHECK(amc::erfc(x) == doctest::Approx(ref).epsilon(1e-13));
    }
    CHECK(amc::erfc(10.0) == doctest::Approx(2.088487583762545e-45).epsilon(1e-13));
    CHECK(amc::erfc(27.3) == 0.0);
    CHECK(amc::erfc(-30.0) == 2.0);
    CHECK(std::isnan(amc::erfc(std::nan(""))));
  }

  TEST_CASE("lognormal moments are matched") {
    const LognormalSpec d(100.0, 10.0);
    const double s2 = std::log1p(0.01);
    CHECK(d.sigma_log() == doctest::Approx(std::sqrt(s2)));
    CHECK(d.mu_log() == doctest::Approx(std::log(100.0) - 0.5 * s2));
    CHECK_THROWS_AS(LognormalSpec(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(LognormalSpec(1.0, -1.0), DomainError);
    CHECK(LognormalSpec(5.0, 0.0).degenerate());
  }

  TEST_CASE("lognormal expectation reproduces moments") {
    const LognormalSpec d(100.0, 10.0);
    CHECK(lognormal_expectation([](double c) { return c; }, d) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(lognormal_expectation([](double c) { return c * c; }, d) ==
          doctest::Approx(10100.0).epsilon(1e-12));
    CHECK(lognormal_expectation([](double c) { return c * c; }, LognormalSpec(7.0, 0.0)) == 49.0);
  }

  TEST_CASE("high-order rules stay finite and exact on moments") {
    // Starting at 256 nodes forces the 512-node rule as well.
    const LognormalSpec d(3.0, 6.0);
    const QuadratureConfig cfg{256, 1e-10};
    const double m2 = lognormal_expectation([](double c) { return c * c; }, d, cfg);
    CHECK(std::isfinite(m2));
    CHECK(m2 == doctest::Approx(45.0).epsilon(1e-10));
  }

  TEST_CASE("lognormal expectation agrees with sampling") {
    const LognormalSpec d(50.0, 20.0);
    auto f = [](double c) { return c / (c + 41.6); };
    std::mt19937_64 gen(7);
    std::normal_distribution<double> z(0.0, 1.0);
    double sum = 0.0;
    double sum2 = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
      const double v = f(std::exp(d.mu_log() + d.sigma_log() * z(gen)));
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(lognormal_expectation(f, d) - mean) < 5.0 * se);
  }

  TEST_CASE("quadrature config is checked") {
    CHECK_THROWS_AS((QuadratureConfig{4, 1e-10}.validate()), ConfigError);
    CHECK_THROWS_AS((QuadratureConfig{16, 0.0}.validate()), ConfigError);
    CHECK_NOTHROW((QuadratureConfig{}.validate()));
  }

  TEST_CASE("an oscillating integrand exhausts the node budget") {
    const LognormalSpec d(1.0, 3.0);
    CHECK_THROWS_AS(lognormal_expectation([](double c) { return std::sin(1e6 * c); }, d,
                                          QuadratureConfig{8, 1e-14}),
                    NonConvergence);
  }

  TEST_CASE("minimize_scalar finds a quadratic minimum") {
    const auto m = minimize_scalar([](double x) { return (x - 1.3) * (x - 1.3) + 2.0; }, 0.0, 4.0, 1e-10);
    CHECK(m.argmin == doctest::Approx(1.3).epsilon(1e-8));
    CHECK(m.value == doctest::Approx(2.0));
    CHECK_THROWS_AS(minimize_scalar([](double x) { return x; }, 1.0, 1.0, 1e-6), InvalidBracket);
  }

  TEST_CASE("minimize_scalar returns an endpoint for monotone functions") {
    const auto m = minimize_scalar([](double x) { return x; }, 2.0, 5.0, 1e-8);
    CHECK(m.argmin == doctest::Approx(2.0).epsilon(1e-7));
  }
}
