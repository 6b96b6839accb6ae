// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <cmath>
#include <random>

#include "mirs/scene.hpp"

using namespace mirs;

namespace {

ScenarioConfig small_config(int L, int M, int K) {
  ScenarioConfig c;
  c.num_bs_antennas = 4;
  c.elements_per_irs.assign(static_cast<std::size_t>(L), M);
  c.users_per_irs.assign(static_cast<std::size_t>(L), K);
  apply_row_layout(c, RowLayout{L, 60.0, 40.0, 20.0});
  return c;
}

}  // namespace

TEST_SUITE("scene") {
  TEST_CASE("noise power follows the thermal floor") {
    CHECK(std::abs(noise_power_dbm(180000.0) + 121.447) < 0.01);
    CHECK(noise_power_dbm(1.0) == -174.0);
    CHECK(std::abs(noise_power_dbm(1e6) + 114.0) < 1e-12);
    CHECK_THROWS_AS(noise_power_dbm(0.0), std::invalid_argument);
    CHECK_THROWS_AS(noise_power_dbm(-5.0), std::invalid_argument);
  }

  TEST_CASE("pathloss model") {
    CHECK(pathloss_db(1.0, 2.2) == -30.0);
    CHECK(std::abs(pathloss_db(60.0, 2.2) + 69.11) < 0.01);
    CHECK(std::abs(pathloss_db(10.0, 3.0) + 60.0) < 1e-12);
    CHECK(pathloss_db(20.0, 2.2) < pathloss_db(10.0, 2.2));
    CHECK(pathloss_db(20.0, 3.0) < pathloss_db(20.0, 2.2));
    CHECK_THROWS_AS(pathloss_db(0.0, 2.2), std::invalid_argument);
    CHECK_THROWS_AS(pathloss_db(-1.0, 2.2), std::invalid_argument);
  }

  TEST_CASE("rician mixing weights and limits") {
    const auto [los, nlos] = rician_weights(5.0);
    const double kappa = std::pow(10.0, 0.5);
    CHECK(std::abs(los - std::sqrt(kappa / (1 + kappa))) < 1e-12);
    CHECK(std::abs(los - 0.871635) < 1e-6);
    CHECK(std::abs(nlos - 0.490156) < 1e-6);

    Rng rng(3);
    const CMat ramp = los_response({0, 0, 25}, 3, {60, 5, 30}, 4, 0.1, 0.05);
    CHECK((ramp.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    const CMat pure = rician_matrix(3, 4, 300.0, ramp, rng);
    CHECK((pure - ramp).cwiseAbs().maxCoeff() < 1e-6);

    // kappa -> 0: pure CN(0,1); moments over 10^4 draws.
    const int draws = 10000;
    const CMat zero_los = CMat::Ones(1, 1);
    cplx mean = 0.0;
    double power = 0.0;
    for (int i = 0; i < draws; ++i) {
      const cplx z = rician_matrix(1, 1, -300.0, zero_los, rng)(0, 0);
      mean += z;
      power += std::norm(z);
    }
    mean /= draws;
    power /= draws;
    // Each component of the mean has std sqrt(0.5/draws).
    CHECK(std::abs(mean.real()) < 5.0 * std::sqrt(0.5 / draws));
    CHECK(std::abs(mean.imag()) < 5.0 * std::sqrt(0.5 / draws));
    CHECK(std::abs(power - 1.0) < 0.1);

    CHECK_THROWS_AS(rician_matrix(2, 2, 5.0, CMat::Ones(2, 3), rng), std::invalid_argument);
  }

  TEST_CASE("raw stream matches the standard engine") {
    Rng a(42);
    std::mt19937_64 ref(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == ref());
    Rng u(1);
    for (int i = 0; i < 1000; ++i) {
      const double x = u.uniform();
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
    }
    CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
  }

  TEST_CASE("group layout flattening") {
    const GroupLayout g({2, 1, 3});
    CHECK(g.total_users() == 6);
    CHECK(g.flat(0, 0) == 0);
    CHECK(g.flat(1, 0) == 2);
    CHECK(g.flat(2, 2) == 5);
    for (int i = 0; i < 6; ++i) {
      const auto [l, k] = g.group_of(i);
      CHECK(g.flat(l, k) == i);
    }
    CHECK_THROWS_AS(g.flat(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(GroupLayout({2, 0}), std::invalid_argument);
  }

  TEST_CASE("config validation names the field") {
    ScenarioConfig c = small_config(2, 3, 2);
    CHECK_NOTHROW(c.validate());
    c.elements_per_irs = {3};
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("elements_per_irs"), std::invalid_argument);
    c = small_config(2, 3, 2);
    c.bandwidth_hz = 0.0;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("bandwidth_hz"), std::invalid_argument);
    c = small_config(2, 3, 2);
    c.user_height_m = -1.0;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("heights"), std::invalid_argument);
    c = small_config(2, 3, 2);
    c.tx_power_dbm = std::nan("");
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("tx_power_dbm"), std::invalid_argument);
  }

  TEST_CASE("row layout matches the small-cell geometry") {
    ScenarioConfig c = small_config(4, 2, 3);
    REQUIRE(c.irs_positions.size() == 4);
    CHECK(c.irs_positions[0] == Point2{60.0, -15.0});
    CHECK(c.irs_positions[1].y - c.irs_positions[0].y == doctest::Approx(10.0));
    CHECK(c.user_areas[0] == Rect{60.0, 80.0, -20.0, -10.0});
  }

  TEST_CASE("scene sampling is deterministic and stays in the areas") {
    const ScenarioConfig c = small_config(3, 2, 4);
    Rng a(11), b(11);
    const Scene s1 = sample_scene(c, a);
    const Scene s2 = sample_scene(c, b);
    for (int l = 0; l < 3; ++l) {
      const auto& area = c.user_areas[static_cast<std::size_t>(l)];
      REQUIRE(s1.users[static_cast<std::size_t>(l)].size() == 4);
      for (int k = 0; k < 4; ++k) {
        const Point3& p = s1.users[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
        CHECK(p == s2.users[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)]);
        CHECK(p.x >= area.x_min);
        CHECK(p.x <= area.x_max);
        CHECK(p.y >= area.y_min);
        CHECK(p.y <= area.y_max);
        CHECK(p.z == c.user_height_m);
      }
    }
  }

  TEST_CASE("channel dimensions, determinism and reciprocity") {
    {
      const ScenarioConfig c = small_config(1, 5, 2);
      Rng rng(4);
      const Scene s = sample_scene(c, rng);
      const RawChannels raw = synth_channels(s, c, rng);
      CHECK(raw.d.size() == 1);
      CHECK(raw.d[0][0].size() == 0);
      CHECK(raw.g[0].rows() == 4);
      CHECK(raw.g[0].cols() == 5);
      CHECK(raw.u[0][0][1].size() == 5);
    }
    const ScenarioConfig c = small_config(3, 3, 2);
    Rng r1(9), r2(9);
    const Scene s1 = sample_scene(c, r1);
    const Scene s2 = sample_scene(c, r2);
    const RawChannels a = synth_channels(s1, c, r1);
    const RawChannels b = synth_channels(s2, c, r2);
    for (std::size_t l = 0; l < 3; ++l) {
      CHECK(a.g[l] == b.g[l]);
      CHECK(a.g[l].allFinite());
      for (std::size_t lp = 0; lp < 3; ++lp) {
        CHECK(a.u[lp][l][0] == b.u[lp][l][0]);
        CHECK(a.u[lp][l][1].size() == 3);
        if (l == lp) continue;
        CHECK(a.d[l][lp].rows() == 3);
        CHECK(a.d[l][lp] == b.d[l][lp]);
        CHECK((a.d[l][lp] - a.d[lp][l].transpose()).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }

  TEST_CASE("link energies follow pathloss and gains") {
    // IRS level with the BS so the link is exactly 60 m long.
    ScenarioConfig c;
    c.num_bs_antennas = 2;
    c.num_irs = 1;
    c.elements_per_irs = {2};
    c.users_per_irs = {1};
    c.irs_positions = {{60.0, 0.0}};
    c.user_areas = {{70.0, 70.0, 0.0, 0.0}};
    c.irs_height_m = c.bs_height_m;
    const double g_expect = std::pow(10.0, (pathloss_db(60.0, 2.2) + 5.0 + 5.0) / 10.0);
    const double user_d = std::hypot(10.0, c.irs_height_m - c.user_height_m);
    const double u_expect = std::pow(10.0, (pathloss_db(user_d, 3.0) + 5.0 + 0.0) / 10.0);
    double g_power = 0.0, u_power = 0.0;
    const int seeds = 1000;
    for (int s = 0; s < seeds; ++s) {
      Rng rng(static_cast<std::uint64_t>(s));
      const Scene scene = sample_scene(c, rng);
      const RawChannels raw = synth_channels(scene, c, rng);
      g_power += raw.g[0].cwiseAbs2().mean();
      u_power += raw.u[0][0][0].cwiseAbs2().mean();
    }
    CHECK(std::abs(g_power / seeds / g_expect - 1.0) < 0.1);
    CHECK(std::abs(u_power / seeds / u_expect - 1.0) < 0.1);
  }
}
