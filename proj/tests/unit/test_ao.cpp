// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <limits>

#include "mirs/ao.hpp"
#include "oracles.hpp"

using namespace mirs;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Uplink drop(int n, const std::vector<int>& m, const std::vector<int>& k, double dbm, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.num_irs = static_cast<int>(m.size());
  cfg.num_bs_antennas = n;
  cfg.elements_per_irs = m;
  cfg.users_per_irs = k;
  cfg.tx_power_dbm = dbm;
  RowLayout row;
  row.num_irs = cfg.num_irs;
  apply_row_layout(cfg, row);
  cfg.rng_seed = seed;
  Rng rng(seed);
  const Scene scene = sample_scene(cfg, rng);
  return make_uplink(cfg, scene, synth_channels(scene, cfg, rng));
}

AoParams quick(std::uint64_t seed) {
  AoParams p;
  p.seed = seed;
  p.randomizations = 200;
  p.max_iterations = 10;
  return p;
}

bool non_decreasing(const std::vector<TraceRecord>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i].gamma_min < trace[i - 1].gamma_min) return false;
  return true;
}

// Largest interference-free SINR any user could see: (sum_j |h_j| terms)^2 P / sigma^2
// over the user's own cascade with all phases co-aligned, ignoring double bounces.
double snr_bound(const Uplink& up) {
  double best = 0.0;
  const auto& cc = up.channels;
  int i = 0;
  for (int l = 0; l < cc.num_irs(); ++l) {
    for (int k = 0; k < cc.layout().users_in(l); ++k, ++i) {
      double total = 0.0;
      for (int a = 0; a < cc.num_antennas(); ++a) {
        double s = 0.0;
        for (int lp = 0; lp < cc.num_irs(); ++lp) {
          s += cc.r(lp, l, k).row(a).cwiseAbs().sum();
          if (lp != l && cc.pair_included(lp, l))
            for (const CMat& qj : cc.q(lp, l, k)) s += qj.row(a).cwiseAbs().sum();
        }
        total += s * s;
      }
      best = std::max(best, up.powers.watts(i) * total / up.noise_watts);
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("ao") {
  TEST_CASE("parameter validation") {
    AoParams p;
    CHECK_NOTHROW(p.validate());
    p.xi = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.epsilon = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.max_iterations = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK(phase_init_from_string(to_string(PhaseInit::ones)) == PhaseInit::ones);
    CHECK_THROWS(phase_init_from_string("sideways"));
  }

  TEST_CASE("initialization is seeded and unit modulus") {
    const Uplink up = drop(4, {4, 4}, {1, 1}, 0.0, 3);
    const AoState a = initialize(up, quick(1), Rng(5));
    const AoState b = initialize(up, quick(1), Rng(5));
    CHECK(a.phases.modulus_error() < 1e-15);
    for (std::size_t l = 0; l < 2; ++l) CHECK(a.phases.theta[l] == b.phases.theta[l]);
    CHECK(a.beamformers.w == b.beamformers.w);
    REQUIRE(a.trace.size() == 1);
    CHECK(a.trace[0].iteration == 0);
    CHECK(a.trace[0].gamma_min == b.trace[0].gamma_min);
    CHECK(a.trace[0].rate == doctest::Approx(rate_of(a.trace[0].gamma_min)));
  }

  TEST_CASE("single element single user starts at the matched-filter SNR") {
    const Uplink up = drop(3, {1}, {1}, 10.0, 11);
    const AoState s = initialize(up, quick(2), Rng(2));
    const CVec h = effective_channel(up.channels, s.phases, 0, 0);
    const double want = up.powers.watts(0) * h.squaredNorm() / up.noise_watts;
    CHECK(s.gamma_min() == doctest::Approx(want).epsilon(1e-10));
    const CVec w = s.beamformers.w.col(0);
    CHECK(std::norm(w.dot(h)) == doctest::Approx(w.squaredNorm() * h.squaredNorm()).epsilon(1e-10));
  }

  TEST_CASE("stall tolerance controls the iteration count") {
    const Uplink up = drop(4, {4, 4}, {1, 1}, 0.0, 4);
    AoParams p = quick(9);
    p.xi = kInf;
    const AoState once = run(up, p);
    CHECK(once.iteration == 1);
    CHECK(once.trace.size() == 2);
    p.xi = 0.0;
    p.max_iterations = 4;
    const AoState capped = run(up, p);
    CHECK(capped.iteration == 4);
    CHECK(capped.trace.size() == 5);
  }

  TEST_CASE("runs are deterministic") {
    const Uplink up = drop(4, {4, 4}, {1, 1}, 0.0, 6);
    const AoState a = run(up, quick(3));
    const AoState b = run(up, quick(3));
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].gamma_min == b.trace[i].gamma_min);
    for (std::size_t l = 0; l < 2; ++l) CHECK(a.phases.theta[l] == b.phases.theta[l]);
  }

  TEST_CASE("trace is monotone, unit modulus and below the SNR bound") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Uplink up = drop(4, {4, 3}, {2, 1}, 5.0, 100 + seed);
      const AoState s = run(up, quick(seed));
      CHECK(non_decreasing(s.trace));
      CHECK(s.phases.modulus_error() < 1e-12);
      CHECK(s.gamma_min() <= snr_bound(up) * (1 + 1e-9));
      CHECK(s.iteration <= 10);
      const CMat H = effective_channel_matrix(up.channels, s.phases);
      CHECK(per_user_sinr(s.beamformers.w, H, up.powers, up.noise_watts).minCoeff() ==
            doctest::Approx(s.gamma_min()).epsilon(1e-12));
    }
  }

  TEST_CASE("frozen phases reduce a step to the beamformer update") {
    const Uplink up = drop(4, {4, 4}, {2, 2}, 5.0, 21);
    AoParams p = quick(4);
    p.optimize_phases = false;
    p.init = PhaseInit::ones;
    p.xi = 0.0;
    p.max_iterations = 3;
    const AoState s = run(up, p);
    CHECK(non_decreasing(s.trace));
    for (const auto& t : s.phases.theta) CHECK((t.array() - cplx(1.0)).abs().maxCoeff() == 0.0);
    const CMat H = effective_channel_matrix(up.channels, s.phases);
    CHECK((s.beamformers.w - mmse(H, up.powers, up.noise_watts).w).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("ten steps improve on the initialization for most drops") {
    int improved = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Uplink up = drop(4, {4, 4}, {1, 1}, 0.0, 500 + seed);
      AoParams p = quick(seed);
      p.xi = 0.0;
      const AoState s = run(up, p);
      CHECK(non_decreasing(s.trace));
      improved += s.gamma_min() > s.trace.front().gamma_min;
    }
    CHECK(improved >= 45);
  }

  TEST_CASE("ignoring double bounces drops them from the model") {
    const Uplink up = drop(4, {3, 3}, {1, 1}, 0.0, 31);
    AoParams p = quick(1);
    p.secondary = false;
    const CascadedChannels model = optimizer_model(up.channels, p);
    CHECK_FALSE(model.pair_included(0, 1));
    CHECK_FALSE(model.pair_included(1, 0));
    p.secondary = true;
    CHECK(optimizer_model(up.channels, p).pair_included(0, 1) == up.channels.pair_included(0, 1));
  }

  TEST_CASE("warm start resumes from the given phases") {
    const Uplink up = drop(4, {4, 4}, {1, 1}, 0.0, 41);
    const AoState first = run(up, quick(7));
    AoParams p = quick(8);
    p.max_iterations = 2;
    const AoState again = run(up, p, first.phases);
    CHECK(again.trace.front().gamma_min >= first.gamma_min() * (1 - 1e-12));
    CHECK(non_decreasing(again.trace));
  }

  TEST_CASE("zero-forcing receivers also give a monotone trace") {
    const Uplink up = drop(4, {4, 4}, {1, 1}, 5.0, 51);
    AoParams p = quick(2);
    p.beamformer = BeamformerKind::zf;
    const AoState s = run(up, p);
    CHECK(non_decreasing(s.trace));
    CHECK(s.beamformers.method == BeamformerKind::zf);
    p.beamformer = BeamformerKind::custom;
    CHECK_THROWS_AS(run(up, p), std::invalid_argument);
  }
}
