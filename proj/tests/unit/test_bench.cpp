// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <set>
#include <sstream>

#include "mirs/bench.hpp"

using namespace mirs;

namespace {

// Small enough to run a handful of trials in a couple of seconds.
constexpr const char* kTiny = R"(scenario:
  num_irs: 2
  num_bs_antennas: 2
  elements_per_irs: 3
  users_per_irs: 1
  tx_power_dbm: 0
  seed: 99
solver:
  max_iterations: 3
  randomizations: 50
sweep:
  tx_power_dbm: [0, 5]
  secondary: [managed, unmanaged, off]
trials: 2
)";

std::string csv_of(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  emit_csv(records, out);
  return out.str();
}

ExperimentRecord sample_record() {
  ExperimentRecord r;
  r.fingerprint = "0123456789abcdef";
  r.seed = 18446744073709551557ULL;
  r.ptx_dbm = 27.5;
  r.min_rate = 0.1 + 0.2;
  r.avg_rate = 1.0 / 3.0;
  r.iters = 17;
  r.gap = 1e-300;
  r.wall_ms = 0.0;
  return r;
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("minimal document takes the documented defaults") {
    const ExperimentPlan p = parse_config("scenario:\n  num_irs: 4\n");
    const ScenarioConfig& c = p.base;
    CHECK(c.num_bs_antennas == 16);
    CHECK(c.bs_height_m == 25.0);
    CHECK(c.irs_height_m == 30.0);
    CHECK(c.user_height_m == 1.5);
    CHECK(c.pathloss.los_exponent == 2.2);
    CHECK(c.pathloss.nlos_exponent == 3.0);
    CHECK(c.rician_factor_db == 5.0);
    CHECK(c.gains.bs_dbi == 5.0);
    CHECK(c.gains.irs_dbi == 5.0);
    CHECK(c.gains.user_dbi == 0.0);
    CHECK(c.bandwidth_hz == 180e3);
    CHECK(c.users_per_irs == std::vector<int>{3, 3, 3, 3});
    CHECK(c.irs_positions.size() == 4);
    CHECK(p.trials == 1);
    CHECK(p.solver == AoParams{});
    CHECK(p.modes == std::vector<SecondaryMode>{SecondaryMode::managed});
    CHECK(expand(p).size() == 1);
  }

  TEST_CASE("missing num_irs is named") {
    try {
      parse_config("scenario:\n  num_bs_antennas: 8\n");
      FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.key() == "num_irs");
      CHECK(std::string(e.what()).find("num_irs") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("trials: 3\n"), ConfigError);
  }

  TEST_CASE("unknown keys are rejected with their line") {
    try {
      parse_config("scenario:\n  num_irs: 2\n\n  antennas: 8\n");
      FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.key() == "antennas");
      CHECK(e.line() == 4);
    }
    CHECK_THROWS_AS(parse_config("scenario:\n  num_irs: 2\nsolver:\n  xi: -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario:\n  num_irs: 2\n  elements_per_irs: [4, 4, 4]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario:\n  num_irs: 2\nsweep:\n  secondary: [sometimes]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario: [1, 2\n"), std::exception);
  }

  TEST_CASE("emit and parse round-trip") {
    const ExperimentPlan p = parse_config(kTiny);
    const std::string text = emit_config(p);
    const ExperimentPlan q = parse_config(text);
    CHECK(q == p);
    CHECK(emit_config(q) == text);

    const ExperimentPlan layouts = parse_config(R"(scenario:
  num_irs: 4
  elements_per_irs: 16
sweep:
  layouts:
    - {num_irs: 4, users_per_irs: 3}
    - {num_irs: 1, users_per_irs: 12, irs_positions: [[60, 10]], user_areas: [[60, 80, -20, 20]]}
  elements_per_irs: [8, 16]
)");
    CHECK(parse_config(emit_config(layouts)) == layouts);
    const auto pts = expand(layouts);
    CHECK(pts.size() == 4);
    CHECK(pts[2].scenario.irs_positions[0] == Point2{60.0, 10.0});
    CHECK(pts[3].scenario.elements_per_irs == std::vector<int>{16});
  }

  TEST_CASE("fingerprints are stable and distinguish points") {
    const auto a = expand(parse_config(kTiny));
    const auto b = expand(parse_config(kTiny));
    REQUIRE(a.size() == 6);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].fingerprint == b[i].fingerprint);
      CHECK(a[i].fingerprint.size() == 16);
      seen.insert(a[i].fingerprint);
      CHECK(a[i].index == static_cast<int>(i));
    }
    CHECK(seen.size() == a.size());
    CHECK(fingerprint_of("") == "cbf29ce484222325");
    CHECK(fingerprint_of("a") == "af63dc4c8601ec8c");
  }

  TEST_CASE("CSV emission") {
    CHECK(csv_of({}) == "fingerprint,seed,ptx_dbm,min_rate,avg_rate,iters,gap,wall_ms\n");
    const std::string one = csv_of({sample_record()});
    CHECK(std::count(one.begin(), one.end(), '\n') == 2);
    std::istringstream in(one);
    const auto back = parse_csv(in);
    REQUIRE(back.size() == 1);
    CHECK(back[0].same_fields(sample_record()));
    std::istringstream bad("seed,fingerprint\n");
    CHECK_THROWS(parse_csv(bad));
  }

  TEST_CASE("experiments are deterministic, paired and thread-invariant") {
    const ExperimentPlan plan = parse_config(kTiny);
    const ExperimentResult a = run_experiment(plan, 1);
    const ExperimentResult b = run_experiment(plan, 1);
    const ExperimentResult c = run_experiment(plan, 3);
    REQUIRE(a.failures.empty());
    REQUIRE(a.records.size() == 12);
    CHECK(csv_of(a.records) == csv_of(b.records));
    CHECK(csv_of(a.records) == csv_of(c.records));

    std::istringstream in(csv_of(a.records));
    const auto back = parse_csv(in);
    REQUIRE(back.size() == a.records.size());
    for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i].same_fields(a.records[i]));

    for (const auto& r : a.records) {
      CHECK(r.min_rate <= r.avg_rate);
      CHECK(std::isfinite(r.min_rate));
      CHECK(std::isfinite(r.gap));
      CHECK(r.wall_ms == 0.0);
      CHECK(r.iters >= 1);
    }

    // Channels are shared across powers and modes for the same trial.
    const auto pts = expand(plan);
    for (int trial = 0; trial < plan.trials; ++trial) {
      std::set<std::string> digests;
      std::set<std::uint64_t> seeds;
      for (const auto& pt : pts) {
        ScenarioConfig cfg = pt.scenario;
        cfg.rng_seed = trial_seed(plan.base.rng_seed, pt.geometry, trial);
        Rng rng(cfg.rng_seed);
        const Scene scene = sample_scene(cfg, rng);
        digests.insert(channel_fingerprint(synth_channels(scene, cfg, rng)));
        seeds.insert(cfg.rng_seed);
      }
      CHECK(digests.size() == 1);
      CHECK(seeds.size() == 1);
    }
  }

  TEST_CASE("off mode equals managed mode with a zero cutoff") {
    ExperimentPlan plan = parse_config(kTiny);
    plan.base.secondary_cutoff_m = 0.0;
    plan.modes = {SecondaryMode::managed, SecondaryMode::off};
    plan.tx_power_dbm = {5.0};
    const auto pts = expand(plan);
    REQUIRE(pts.size() == 2);
    for (int trial = 0; trial < 2; ++trial) {
      const TrialRun m = run_trial(pts[0], trial, plan.base.rng_seed);
      const TrialRun o = run_trial(pts[1], trial, plan.base.rng_seed);
      CHECK(m.record.seed == o.record.seed);
      CHECK(m.record.min_rate == o.record.min_rate);
      CHECK(m.record.avg_rate == o.record.avg_rate);
      CHECK(m.record.iters == o.record.iters);
      CHECK(m.channel_digest == o.channel_digest);
    }
  }

  TEST_CASE("wall time is recorded only on request") {
    ExperimentPlan plan = parse_config(kTiny);
    plan.tx_power_dbm = {0.0};
    plan.modes = {SecondaryMode::managed};
    plan.trials = 1;
    plan.record_wall_time = true;
    const ExperimentResult r = run_experiment(plan);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].wall_ms > 0.0);
  }

  TEST_CASE("trial failures are collected without stopping the run") {
    ExperimentPlan plan = parse_config(kTiny);
    plan.modes = {SecondaryMode::managed};
    plan.tx_power_dbm = {0.0};
    plan.solver.beamformer = BeamformerKind::zf;
    plan.base.num_bs_antennas = 1;  // two users on one antenna: ZF is singular
    const ExperimentResult r = run_experiment(plan);
    CHECK(r.records.empty());
    CHECK(r.failures.size() == 2);
    for (const auto& f : r.failures) CHECK_FALSE(f.what.empty());
  }
  TEST_CASE("managing strong double bounces pays off on paired drops") {
    // Surfaces 6 m apart with 20 dBi elements make the double bounce
    // comparable to the direct cascade, so ignoring it must cost rate.
    const ExperimentPlan plan = parse_config(R"(scenario:
  num_irs: 2
  num_bs_antennas: 2
  elements_per_irs: 4
  users_per_irs: 1
  irs_positions: [[60, -3], [60, 3]]
  user_areas: [[61, 65, -8, -4], [61, 65, 4, 8]]
  gains: {bs_dbi: 5, irs_dbi: 20, user_dbi: 0}
  tx_power_dbm: -20
  seed: 5
solver:
  max_iterations: 5
  randomizations: 100
sweep:
  secondary: [managed, unmanaged]
trials: 20
)");
    const ExperimentResult r = run_experiment(plan, 1);
    REQUIRE(r.failures.empty());
    REQUIRE(r.records.size() == 40);
    int wins = 0;
    for (int t = 0; t < 20; ++t) {
      const auto& managed = r.records[static_cast<std::size_t>(t)];
      const auto& unmanaged = r.records[static_cast<std::size_t>(20 + t)];
      CHECK(managed.seed == unmanaged.seed);
      wins += managed.min_rate >= unmanaged.min_rate;
    }
    CHECK(wins >= 18);
  }
}
