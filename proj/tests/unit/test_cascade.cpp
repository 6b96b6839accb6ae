// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <cstdlib>
#include <limits>

#include "mirs/cascade.hpp"
#include "oracles.hpp"

using namespace mirs;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PhaseConfig as_config(const std::vector<CVec>& theta) { return PhaseConfig{theta}; }

double max_abs_diff(const CMat& a, const CMat& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("cascade") {
  TEST_CASE("R/Q composition equals the direct reflection-matrix form") {
    Rng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const int L = 1 + static_cast<int>(rng.next_u64() % 3);
      const int N = 1 + static_cast<int>(rng.next_u64() % 4);
      std::vector<int> m, k;
      for (int l = 0; l < L; ++l) {
        m.push_back(1 + static_cast<int>(rng.next_u64() % 3));
        k.push_back(1 + static_cast<int>(rng.next_u64() % 2));
      }
      const auto in = oracle::random_instance(N, m, k, rng);
      const auto theta = oracle::random_phases(m, rng);
      const CascadedChannels cc = build_cascaded(in.raw, true, kInf, in.scene);
      CHECK(cc.has_secondary() == (L > 1));
      const CMat got = effective_channel_matrix(cc, as_config(theta));
      const CMat want = oracle::direct_channel_matrix(in.raw, theta, k, oracle::all_pairs);
      worst = std::max(worst, max_abs_diff(got, want));

      const CMat prim = effective_channel_matrix(cc.without_secondary(), as_config(theta));
      worst = std::max(worst, max_abs_diff(prim, oracle::direct_channel_matrix(in.raw, theta, k, oracle::no_pairs)));
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("single columns agree with the matrix form") {
    Rng rng(5);
    const auto in = oracle::random_instance(3, {2, 3}, {2, 1}, rng);
    const auto theta = oracle::random_phases(in.m, rng);
    const CascadedChannels cc = build_cascaded(in.raw, true, kInf, in.scene);
    const CMat H = effective_channel_matrix(cc, as_config(theta));
    CHECK(max_abs_diff(H.col(2), effective_channel(cc, as_config(theta), 1, 0)) == 0.0);
    CHECK_THROWS_AS(effective_channel(cc, as_config(theta), 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(effective_channel(cc, as_config(theta), 1, 1), std::invalid_argument);
  }

  TEST_CASE("distance cutoff drops far pairs only") {
    Rng rng(17);
    const auto in = oracle::random_instance(2, {2, 2, 2}, {1, 1, 1}, rng);
    const auto theta = oracle::random_phases(in.m, rng);
    // IRSs sit 10 m apart: a 15 m cutoff keeps neighbours only.
    const CascadedChannels cc = build_cascaded(in.raw, true, 15.0, in.scene);
    CHECK(cc.pair_included(0, 1));
    CHECK(cc.pair_included(2, 1));
    CHECK_FALSE(cc.pair_included(0, 2));
    CHECK(cc.q(2, 0, 0).empty());
    CHECK(cc.q(1, 0, 0).size() == 2);
    auto near = [](int lp, int l) { return std::abs(lp - l) <= 1; };
    CHECK(max_abs_diff(effective_channel_matrix(cc, as_config(theta)),
                       oracle::direct_channel_matrix(in.raw, theta, in.k, near)) < 1e-12);

    const CascadedChannels none = build_cascaded(in.raw, true, 0.0, in.scene);
    CHECK_FALSE(none.has_secondary());
    const CascadedChannels off = build_cascaded(in.raw, false, kInf, in.scene);
    CHECK_FALSE(off.has_secondary());
    CHECK(effective_channel_matrix(none, as_config(theta)) == effective_channel_matrix(off, as_config(theta)));
  }

  TEST_CASE("cascaded blocks have the documented shapes") {
    Rng rng(23);
    const auto in = oracle::random_instance(4, {2, 3}, {1, 2}, rng);
    const CascadedChannels cc = build_cascaded(in.raw, true, kInf, in.scene);
    CHECK(cc.num_antennas() == 4);
    CHECK(cc.total_users() == 3);
    CHECK(cc.r(0, 1, 1).rows() == 4);
    CHECK(cc.r(0, 1, 1).cols() == 2);
    // Q[lp][l][k] has one block per element of IRS l, each N x M_lp.
    REQUIRE(cc.q(0, 1, 0).size() == 3);
    CHECK(cc.q(0, 1, 0)[0].cols() == 2);
    CHECK(cc.q(1, 1, 0).empty());
  }

  TEST_CASE("phase configurations are unit modulus") {
    Rng rng(2);
    const PhaseConfig p = PhaseConfig::random({3, 5, 1}, rng);
    CHECK(p.num_irs() == 3);
    CHECK(p.modulus_error() < 1e-15);
    const PhaseConfig ones = PhaseConfig::ones({2, 2});
    CHECK(ones.modulus_error() == 0.0);
    PhaseConfig bad = ones;
    bad.theta[1](0) = 0.5;
    CHECK(bad.modulus_error() == doctest::Approx(0.5));
  }
}
