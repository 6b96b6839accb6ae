// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "mirs/beamform.hpp"
#include "mirs/cascade.hpp"
#include "mirs/phaseopt.hpp"
#include "mirs/rng.hpp"

namespace mirs {

/// Channels plus the per-user powers and receiver noise they are used with.
struct Uplink {
  CascadedChannels channels;
  PowerAllocation powers;
  double noise_watts = 0.0;
};

/// Cascades `raw` and attaches the powers and noise of `config`.
Uplink make_uplink(const ScenarioConfig& config, const Scene& scene, const RawChannels& raw);

enum class PhaseInit { random, ones };

std::string_view to_string(PhaseInit init);
PhaseInit phase_init_from_string(std::string_view name);

struct AoParams {
  double xi = 1e-4;       // stall tolerance on the min SINR
  double epsilon = 1e-3;  // relative bisection accuracy
  int max_iterations = 50;
  int randomizations = 1000;
  BeamformerKind beamformer = BeamformerKind::mmse;
  bool secondary = true;  // false: the optimizer ignores double bounces
  std::uint64_t seed = 1;
  PhaseInit init = PhaseInit::random;
  SdrSettings sdr;
  bool optimize_phases = true;  // false freezes theta (beamformer-only passes)

  bool operator==(const AoParams&) const = default;

  /// Throws std::invalid_argument on xi < 0, epsilon <= 0 or max_iterations < 1.
  void validate() const;
  PhaseOptParams phase_params() const;
};

struct TraceRecord {
  int iteration = 0;
  double gamma_min = 0.0;
  double rate = 0.0;  // log2(1 + gamma_min)
};

struct AoStats {
  int irs_updates = 0;
  int accepted = 0;
  int skipped = 0;
  int low_rank = 0;
  int beamformer_rejections = 0;  // new W would have lowered the min SINR
  int solves = 0;
  long conic_iterations = 0;
  double gap_sum = 0.0;  // over solved (non-skipped) updates
  int gap_count = 0;

  double mean_gap() const { return gap_count > 0 ? gap_sum / gap_count : 0.0; }
};

struct AoState {
  PhaseConfig phases;
  BeamformerBank beamformers;
  std::vector<TraceRecord> trace;
  RVec sinr;  // per user, under the optimizer's model
  int iteration = 0;
  Rng rng;
  AoStats stats;

  double gamma_min() const { return trace.empty() ? 0.0 : trace.back().gamma_min; }
  double min_rate() const { return rate_of(gamma_min()); }
};

/// Channels the optimizer works with under `params` (double bounces dropped
/// when params.secondary is false).
CascadedChannels optimizer_model(const CascadedChannels& cc, const AoParams& params);

/// theta(0) per params.init, W(0) for theta(0), and the first trace record.
AoState initialize(const Uplink& up, const AoParams& params, Rng rng);

/// Same as initialize but starting from given phases (warm start).
AoState initialize_from(const Uplink& up, const AoParams& params, const PhaseConfig& phases, Rng rng);

/// One full pass: beamformer update, then IRS 0..L-1 in order, each using
/// the already updated phases of the IRSs before it. Appends to the trace.
/// `up` must already carry the optimizer's model.
void step(AoState& state, const Uplink& up, const AoParams& params);

/// Iterates step until |gamma(n) - gamma(n-1)| < xi or n reaches the cap.
AoState run(const Uplink& up, const AoParams& params);

/// Warm-started variant.
AoState run(const Uplink& up, const AoParams& params, const PhaseConfig& warm);

}  // namespace mirs
