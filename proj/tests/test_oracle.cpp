#include <doctest.h>

#include <cmath>
#include <set>

#include "amc/adaptation.hpp"
#include "amc/detection.hpp"
#include "amc/errors.hpp"
#include "amc/oracle.hpp"
#include "amc/rng.hpp"

using namespace amc;

namespace {

OraclePoint memoryless(double c0, double c1, const Receptors& r) {
  OraclePoint p;
  p.c0 = c0;
  p.c1 = c1;
  p.receptors = r;
  p.threshold = optimal_threshold(binding_stats(c0, r), binding_stats(c1, r));
  return p;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("split_seed gives distinct streams") {
    std::set<std::uint64_t> keys;
    for (std::uint64_t i = 0; i < 10000; ++i) keys.insert(split_seed(0, i));
    CHECK(keys.size() == 10000);
    CHECK(split_seed(1, 0) != split_seed(0, 0));
    Xoshiro256 a(split_seed(0, 0));
    Xoshiro256 b(split_seed(0, 0));
    CHECK(a.next() == b.next());
  }

  TEST_CASE("uniform and normal draws") {
    Xoshiro256 rng(123);
    double sum = 0.0;
    double sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      const double z = rng.normal();
      sum += z;
      sum2 += z * z;
    }
    CHECK(std::abs(sum / n) < 5.0 / std::sqrt(n));
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("binomial sampler matches the pmf") {
    Xoshiro256 rng(99);
    const int n = 20;
    const double p = 0.3;
    std::vector<int> counts(n + 1, 0);
    const int draws = 400000;
    for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(binomial(rng, n, p))];
    double chi2 = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double pmf = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                  std::lgamma(n - k + 1.0) + k * std::log(p) +
                                  (n - k) * std::log1p(-p));
      const double expected = pmf * draws;
      if (expected < 5.0) continue;
      const double d = counts[static_cast<std::size_t>(k)] - expected;
      chi2 += d * d / expected;
    }
    CHECK(chi2 < 50.0);  // ~15 degrees of freedom
    CHECK(binomial(rng, 0, 0.5) == 0);
    CHECK(binomial(rng, 10, 0.0) == 0);
    CHECK(binomial(rng, 10, 1.0) == 10);
  }

  TEST_CASE("binomial sampler moments at large n") {
    Xoshiro256 rng(5);
    for (double p : {0.02, 0.5, 0.97}) {
      double sum = 0.0;
      double sum2 = 0.0;
      const int draws = 100000;
      for (int i = 0; i < draws; ++i) {
        const double v = static_cast<double>(binomial(rng, 1000, p));
        sum += v;
        sum2 += v * v;
      }
      const double mean = sum / draws;
      const double var = sum2 / draws - mean * mean;
      CHECK(std::abs(mean - 1000 * p) < 5.0 * std::sqrt(1000 * p * (1 - p) / draws));
      CHECK(var == doctest::Approx(1000 * p * (1 - p)).epsilon(0.03));
    }
  }

  TEST_CASE("identical levels are a coin flip") {
    const ReceptorConfig r{10.0, 1000};
    auto pt = memoryless(10.0, 10.0, r);
    pt.threshold = binding_stats(10.0, r).mean;
    const auto est = simulate_bep(pt, {100000, 1});
    CHECK(std::abs(est.bep - 0.5) <= 4.0 * est.std_error);
  }

  TEST_CASE("baseline defaults produce no errors") {
    const ChannelParams ch;
    const double c0 = received_concentration(0, ch, ch.t_sample());
    const double c1 = received_concentration(1, ch, ch.t_sample());
    const auto est = simulate_bep(memoryless(c0, c1, ReceptorConfig{std::sqrt(c0 * c1), 1000}),
                                  {100000, 42});
    CHECK(est.errors == 0);
    CHECK(est.std_error == doctest::Approx(3.0 / 100000));
  }

  TEST_CASE("analytic and oracle agree where the Gaussian model holds") {
    const ReceptorConfig r{150.0, 1000};
    const auto pt = memoryless(100.0, 200.0, r);
    const double analytic = bep(binding_stats(100.0, r), binding_stats(200.0, r), *pt.threshold);
    const auto est = simulate_bep(pt, {400000, 7});
    CHECK(std::abs(analytic - est.bep) <= 4.0 * est.std_error);
  }

  TEST_CASE("results do not depend on layout") {
    const ReceptorConfig r{150.0, 1000};
    const auto pt = memoryless(100.0, 200.0, r);
    OracleConfig a{200000, 9, 200000, OracleMode::Genie, true, 1};
    OracleConfig b{200000, 9, 7919, OracleMode::Genie, true, 3};
    CHECK(simulate_bep(pt, a).errors == simulate_bep(pt, b).errors);
    CHECK(simulate_bep(pt, a).errors == simulate_bep(pt, a).errors);
  }

  TEST_CASE("exact and Gaussian draws agree at moderate occupancy") {
    const ReceptorConfig r{150.0, 1000};
    const auto pt = memoryless(100.0, 200.0, r);
    OracleConfig exact{400000, 17};
    OracleConfig gauss = exact;
    gauss.exact_binomial = false;
    const auto a = simulate_bep(pt, exact);
    const auto b = simulate_bep(pt, gauss);
    CHECK(std::abs(a.bep - b.bep) <= 3.0 * std::hypot(a.std_error, b.std_error));
  }

  TEST_CASE("interference draws") {
    const ReceptorConfig r{50.0, 1000};
    const LognormalSpec d(50.0, 10.0);
    OraclePoint pt;
    pt.c0 = 6.0;
    pt.c1 = 60.0;
    pt.receptors = r;
    pt.interference = d;
    const auto s0 = binding_stats_with_interference(6.0, d, r);
    const auto s1 = binding_stats_with_interference(60.0, d, r);
    pt.threshold = optimal_threshold(s0, s1);
    const auto est = simulate_bep(pt, {400000, 3});
    const double analytic = bep(s0, s1, *pt.threshold);
    CHECK(analytic > 1e-3);
    CHECK(std::abs(analytic - est.bep) <= 4.0 * est.std_error);
  }

  TEST_CASE("decision feedback costs the baseline receiver") {
    ChannelParams ch;
    ch.memory_length = 10;
    ch.ts_factor = 2.0;
    const double c0 = received_concentration(0, ch, ch.t_sample());
    const double c1 = received_concentration(1, ch, ch.t_sample());
    OraclePoint pt;
    pt.c0 = c0;
    pt.c1 = c1;
    pt.receptors = ReceptorConfig{std::sqrt(c0 * c1), 1000};
    pt.isi = IsiLink{ch, isi_taps(ch, ch.t_sample()), 2};
    OracleConfig genie{200000, 4};
    OracleConfig df = genie;
    df.mode = OracleMode::DecisionFeedback;
    const auto g = simulate_bep(pt, genie);
    const auto f = simulate_bep(pt, df);
    CHECK(g.errors > 0);
    CHECK(f.bep >= g.bep - 3.0 * std::hypot(g.std_error, f.std_error));
  }

  TEST_CASE("with full memory decision feedback cannot beat genie") {
    // M = I leaves no unremembered tail for a wrong decision to correlate with.
    ChannelParams ch;
    ch.memory_length = 10;
    ch.ts_factor = 2.0;
    const double c0 = received_concentration(0, ch, ch.t_sample());
    const double c1 = received_concentration(1, ch, ch.t_sample());
    for (const double scale : {1.0, 4.0}) {
      OraclePoint pt;
      pt.c0 = c0;
      pt.c1 = c1;
      pt.receptors = ReceptorConfig{scale * std::sqrt(c0 * c1), 1000};
      pt.isi = IsiLink{ch, isi_taps(ch, ch.t_sample()), 10};
      OracleConfig genie{200000, 9};
      OracleConfig df = genie;
      df.mode = OracleMode::DecisionFeedback;
      const auto g = simulate_bep(pt, genie);
      const auto f = simulate_bep(pt, df);
      CHECK(g.errors > 0);
      CHECK(f.bep >= g.bep - 3.0 * std::hypot(g.std_error, f.std_error));
    }
  }

  TEST_CASE("unresolved points are rejected") {
    OraclePoint pt;
    pt.c0 = 1.0;
    pt.c1 = 2.0;
    CHECK_THROWS_AS(simulate_bep(pt, {1000, 1}), ConfigError);
    pt.threshold = 1.0;
    CHECK_THROWS_AS(simulate_bep(pt, {0, 1}), ConfigError);
  }
}
