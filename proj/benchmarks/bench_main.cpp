// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------
//
// Hot paths: PSD projection, one SDR feasibility probe, one IRS update and
// one full alternating pass on the desk-scale layouts.

#include <benchmark/benchmark.h>

#include "mirs/ao.hpp"
#include "mirs/conic.hpp"
#include "mirs/phaseopt.hpp"

using namespace mirs;

namespace {

Uplink desk_uplink(int num_irs, int antennas, int elements, int users, double dbm) {
  ScenarioConfig cfg;
  cfg.num_irs = num_irs;
  cfg.num_bs_antennas = antennas;
  cfg.elements_per_irs.assign(static_cast<std::size_t>(num_irs), elements);
  cfg.users_per_irs.assign(static_cast<std::size_t>(num_irs), users);
  cfg.tx_power_dbm = dbm;
  RowLayout row;
  row.num_irs = num_irs;
  apply_row_layout(cfg, row);
  Rng rng(2024);
  const Scene scene = sample_scene(cfg, rng);
  return make_uplink(cfg, scene, synth_channels(scene, cfg, rng));
}

struct IrsCase {
  Uplink up;
  PhaseConfig phases;
  CMat W;
};

IrsCase irs_case(int elements) {
  IrsCase c{desk_uplink(4, 8, elements, 3, 10.0), {}, {}};
  Rng rng(7);
  c.phases = PhaseConfig::random(c.up.channels.elements_per_irs(), rng);
  c.W = mmse(effective_channel_matrix(c.up.channels, c.phases), c.up.powers, c.up.noise_watts).w;
  return c;
}

void BM_ProjectPsd(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Rng rng(1);
  RMat a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rng.normal();
  const RMat x = 0.5 * (a + a.transpose());
  for (auto _ : state) benchmark::DoNotOptimize(conic::project_psd(x));
}
BENCHMARK(BM_ProjectPsd)->Arg(10)->Arg(34)->Arg(130);

void BM_SdrProbe(benchmark::State& state) {
  const IrsCase c = irs_case(static_cast<int>(state.range(0)));
  const SdrSubproblem sub = SdrSubproblem::from_coeffs(
      reduced_coeffs(c.up.channels, c.phases, c.W, c.up.powers.watts, c.up.noise_watts, 0).normalized());
  const double delta = 0.5 * sub.upper_bound();
  long iterations = 0;
  for (auto _ : state) {
    const FeasibilityResult r = sdr_feasible(sub, delta);
    iterations += r.iterations;
    benchmark::DoNotOptimize(r.feasible);
  }
  state.counters["admm_iters"] = benchmark::Counter(static_cast<double>(iterations), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_SdrProbe)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_IrsUpdate(benchmark::State& state) {
  const IrsCase c = irs_case(static_cast<int>(state.range(0)));
  PhaseOptParams params;
  for (auto _ : state) {
    Rng rng(3);
    benchmark::DoNotOptimize(
        optimize_irs(0, c.up.channels, c.phases, c.W, c.up.powers, c.up.noise_watts, params, rng).objective_after);
  }
}
BENCHMARK(BM_IrsUpdate)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_AoStep(benchmark::State& state) {
  const Uplink up = desk_uplink(static_cast<int>(state.range(0)), 8, 16, 12 / static_cast<int>(state.range(0)), 10.0);
  AoParams params;
  const AoState start = initialize(up, params, Rng(params.seed));
  for (auto _ : state) {
    AoState s = start;
    step(s, up, params);
    benchmark::DoNotOptimize(s.gamma_min());
  }
}
BENCHMARK(BM_AoStep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
