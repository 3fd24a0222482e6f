#include <doctest.h>

#include <cmath>

#include "amc/errors.hpp"
#include "amc/repro.hpp"
#include "amc/scenarios.hpp"

using namespace amc;

namespace {

ScenarioSpec spec_of(ScenarioKind kind, std::vector<double> grid = {}) {
  ScenarioSpec s;
  s.kind = kind;
  s.grid = std::move(grid);
  return s;
}

double bep_of(const std::vector<SweepRow>& rows, double param, Architecture arch,
              const std::string& knowledge = {}) {
  for (const auto& r : rows) {
    if (r.param_value == param && r.arch == arch && r.knowledge == knowledge) return r.bep_analytic;
  }
  FAIL("row not found");
  return 0.0;
}

}  // namespace

TEST_SUITE("scenarios") {
  TEST_CASE("default grids") {
    CHECK(default_grid(ScenarioKind::Scaling).size() == 25);
    CHECK(default_grid(ScenarioKind::Scaling)[12] == 1.0);
    CHECK(default_grid(ScenarioKind::Scaling).front() == doctest::Approx(0.01));
    CHECK(default_grid(ScenarioKind::Scaling).back() == doctest::Approx(100.0));
    CHECK(default_grid(ScenarioKind::Shift).size() == 7);
    CHECK(default_grid(ScenarioKind::Enzyme).size() == 16);
    CHECK(default_grid(ScenarioKind::Enzyme).back() == 1.5);
    CHECK(default_grid(ScenarioKind::IsiTs).back() == 64.0);
    CHECK(default_grid(ScenarioKind::IsiMemory).size() == 9);
    CHECK(default_grid(ScenarioKind::Interference).size() == 13);
    CHECK(default_grid(ScenarioKind::RatioSweep).size() == 6);
  }

  TEST_CASE("grid validation") {
    const ModelSetup setup;
    CHECK_THROWS_AS(spec_of(ScenarioKind::Scaling, {1.0, 0.5}).validate(setup), ValidationError);
    CHECK_THROWS_AS(spec_of(ScenarioKind::Scaling, {0.0, 1.0}).validate(setup), ValidationError);
    CHECK_THROWS_AS(spec_of(ScenarioKind::IsiMemory, {0.0, 31.0}).validate(setup), ValidationError);
    CHECK_THROWS_AS(spec_of(ScenarioKind::IsiMemory, {0.5}).validate(setup), ValidationError);
    CHECK_THROWS_AS(spec_of(ScenarioKind::RatioSweep, {1.0}).validate(setup), ValidationError);
    CHECK_NOTHROW(spec_of(ScenarioKind::Shift).validate(setup));
  }

  TEST_CASE("no change leaves every architecture at the baseline") {
    const ModelSetup setup;
    const auto scaled = run_scaling_sweep(spec_of(ScenarioKind::Scaling, {1.0}), setup);
    const auto shifted = run_shift_sweep(spec_of(ScenarioKind::Shift, {0.0}), setup);
    const double nar = scaled.front().bep_analytic;
    for (const auto& r : scaled) CHECK(r.bep_analytic == doctest::Approx(nar).epsilon(1e-12));
    for (const auto& r : shifted) CHECK(r.bep_analytic == doctest::Approx(nar).epsilon(1e-12));
    CHECK(scaled.size() == 3);
    CHECK(scaled[2].kd_new.has_value());
  }

  TEST_CASE("scaling sweep") {
    const ModelSetup setup;
    const auto rows = run_scaling_sweep(spec_of(ScenarioKind::Scaling), setup);
    CHECK(rows.size() == 75);
    CHECK(bep_of(rows, 100.0, Architecture::Nar) > bep_of(rows, 1.0, Architecture::Nar));
    CHECK(check_ordering(rows).passed);
    for (const auto& r : rows) {
      CHECK(r.bep_analytic > 0.0);
      CHECK(r.bep_analytic <= 0.5);
      CHECK_FALSE(r.oracle.has_value());
    }
  }

  TEST_CASE("shift saturates the fixed receiver") {
    const ModelSetup setup;
    const auto rows = run_shift_sweep(spec_of(ScenarioKind::Shift, {20.0}), setup);
    const auto& nar = rows.front();
    CHECK(nar.stats0.mean / 1000.0 > 0.9);
    CHECK(nar.stats1.mean / 1000.0 > 0.9);
    CHECK(bep_of(rows, 20.0, Architecture::Rtar) < bep_of(rows, 20.0, Architecture::Rear));
    CHECK(bep_of(rows, 20.0, Architecture::Rear) < bep_of(rows, 20.0, Architecture::Nar));
  }

  TEST_CASE("enzyme rows equal scaling rows") {
    const ModelSetup setup;
    const auto rows = run_enzyme_sweep(spec_of(ScenarioKind::Enzyme, {0.0, 0.71, 1.5}), setup);
    for (const double beta : {0.0, 0.71, 1.5}) {
      const double gamma = std::exp(-beta * setup.channel.t_sample());
      const auto scaled = run_scaling_sweep(spec_of(ScenarioKind::Scaling, {gamma}), setup);
      for (const auto& s : scaled) {
        CHECK(bep_of(rows, beta, s.arch) == doctest::Approx(s.bep_analytic).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("isi with full genie memory uses the exact interference") {
    ModelSetup setup;
    setup.channel.memory_length = 6;
    const Receptors r = ReceptorConfig{41.6, 1000};
    const auto full = evaluate_isi(setup.channel, r, 6, setup);
    const auto none = evaluate_isi(setup.channel, r, 0, setup);
    CHECK(full.bep <= none.bep);
    CHECK_THROWS_AS(evaluate_isi(setup.channel, r, 7, setup), LengthMismatch);
  }

  TEST_CASE("isi memory helps monotonically at I = 10") {
    ModelSetup setup;
    setup.channel.memory_length = 10;
    const auto rows = run_isi_sweep(spec_of(ScenarioKind::IsiMemory), setup);
    for (const auto arch : {Architecture::Nar, Architecture::Rtar, Architecture::Rear}) {
      for (int m = 1; m <= 8; ++m) {
        CHECK(bep_of(rows, m, arch, "genie") <= bep_of(rows, m - 1, arch, "genie") * (1 + 1e-12));
      }
    }
  }

  TEST_CASE("isi vanishes for very long intervals") {
    ModelSetup setup;
    const auto rows = run_isi_sweep(spec_of(ScenarioKind::IsiTs, {1e7}), setup);
    const auto base = run_scaling_sweep(spec_of(ScenarioKind::Scaling, {1.0}), setup);
    for (const auto& r : rows) {
      CHECK(r.bep_analytic == doctest::Approx(base.front().bep_analytic).epsilon(0.01));
    }
  }

  TEST_CASE("isi adaptivity gain") {
    ModelSetup setup;
    const auto rows = run_isi_sweep(spec_of(ScenarioKind::IsiTs, {4.0}), setup);
    CHECK(bep_of(rows, 4.0, Architecture::Rtar, "genie") * 5.0 <=
          bep_of(rows, 4.0, Architecture::Nar, "genie"));
    CHECK(check_ordering(rows).passed);
  }

  TEST_CASE("interference knowledge") {
    const ModelSetup setup;
    const auto rows = run_interference_sweep(spec_of(ScenarioKind::Interference, {2.0, 20.0}), setup);
    CHECK(rows.size() == 12);
    for (const double mu : {2.0, 20.0}) {
      for (const auto arch : {Architecture::Nar, Architecture::Rtar, Architecture::Rear}) {
        CHECK(bep_of(rows, mu, arch, "full-stats") <= bep_of(rows, mu, arch, "first-moment"));
      }
    }
    CHECK(bep_of(rows, 2.0, Architecture::Rtar, "first-moment") <=
          0.1 * bep_of(rows, 2.0, Architecture::Nar, "first-moment"));
  }

  TEST_CASE("weak interference returns to the baseline") {
    const ModelSetup setup;
    const auto rows = run_interference_sweep(spec_of(ScenarioKind::Interference, {1e-9}), setup);
    const auto base = run_scaling_sweep(spec_of(ScenarioKind::Scaling, {1.0}), setup);
    for (const auto& r : rows) {
      CHECK(r.bep_analytic == doctest::Approx(base.front().bep_analytic).epsilon(0.01));
    }
  }

  TEST_CASE("ratio sweep") {
    const ModelSetup setup;
    const auto rows = run_ratio_sweep(spec_of(ScenarioKind::RatioSweep), setup);
    CHECK(rows.size() == 18);
    CHECK(check_ordering(rows).passed);
  }

  TEST_CASE("oracle columns follow the trial budget") {
    ModelSetup setup;
    setup.oracle.trials = 20000;
    const auto rows = run_shift_sweep(spec_of(ScenarioKind::Shift, {20.0}), setup);
    for (const auto& r : rows) CHECK(r.oracle.has_value());
    const auto again = run_shift_sweep(spec_of(ScenarioKind::Shift, {20.0}), setup);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].oracle->errors == again[i].oracle->errors);

    setup.channel.memory_length = 6;
    const auto isi = run_isi_sweep(spec_of(ScenarioKind::IsiTs, {2.0}), setup);
    CHECK(isi.size() == 6);
    CHECK(isi[0].knowledge == "genie");
    CHECK(isi[1].knowledge == "decision-feedback");
  }

  TEST_CASE("response curve") {
    const double k = 41.65;
    const auto grid = centred_log_grid(k, 4.0, 40);
    CHECK(grid[40] == k);
    const auto single = export_response_curve(ReceptorConfig{k, 1000}, grid);
    CHECK(single.occupancy[40] == 0.5);
    CHECK(single.c10 * single.c90 == doctest::Approx(k * k).epsilon(1e-15));
    const auto mix = export_response_curve(MixtureConfig{4165.0, k, 0.5, 1000}, grid);
    CHECK(mix.c90 / mix.c10 > single.c90 / single.c10);
    CHECK(mixture_bind_prob(mix.c10, MixtureConfig{4165.0, k, 0.5, 1000}) ==
          doctest::Approx(0.1).epsilon(1e-9));
  }
}
