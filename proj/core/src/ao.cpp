// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#include "mirs/ao.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mirs {

Uplink make_uplink(const ScenarioConfig& config, const Scene& scene, const RawChannels& raw) {
  Uplink up;
  up.channels = build_cascaded(raw, config.secondary_reflections, config.secondary_cutoff_m, scene);
  up.powers = PowerAllocation::uniform_dbm(config.total_users(), config.tx_power_dbm);
  up.noise_watts = config.noise_watts();
  return up;
}

std::string_view to_string(PhaseInit init) {
  return init == PhaseInit::ones ? "ones" : "random";
}

PhaseInit phase_init_from_string(std::string_view name) {
  if (name == "random") return PhaseInit::random;
  if (name == "ones") return PhaseInit::ones;
  throw std::invalid_argument("unknown phase initialization '" + std::string(name) + "'");
}

void AoParams::validate() const {
  if (!(xi >= 0.0)) throw std::invalid_argument("xi must be non-negative");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  if (randomizations < 0) throw std::invalid_argument("randomizations must be non-negative");
  if (beamformer == BeamformerKind::custom) throw std::invalid_argument("beamformer must be mmse or zf");
}

PhaseOptParams AoParams::phase_params() const {
  PhaseOptParams p;
  p.epsilon = epsilon;
  p.randomizations = randomizations;
  p.sdr = sdr;
  return p;
}

CascadedChannels optimizer_model(const CascadedChannels& cc, const AoParams& params) {
  return params.secondary ? cc : cc.without_secondary();
}

namespace {

void record(AoState& s, const Uplink& up) {
  const CMat H = effective_channel_matrix(up.channels, s.phases);
  s.sinr = per_user_sinr(s.beamformers.w, H, up.powers, up.noise_watts);
  const double g = s.sinr.minCoeff();
  s.trace.push_back({s.iteration, g, rate_of(g)});
}

}  // namespace

AoState initialize_from(const Uplink& up, const AoParams& params, const PhaseConfig& phases, Rng rng) {
  params.validate();
  if (phases.theta.size() != up.channels.elements_per_irs().size())
    throw std::invalid_argument("initial phases do not match the IRS count");
  AoState s;
  s.rng = rng;
  s.phases = phases;
  s.beamformers = compute_beamformers(params.beamformer, effective_channel_matrix(up.channels, s.phases),
                                      up.powers, up.noise_watts);
  record(s, up);
  return s;
}

AoState initialize(const Uplink& up, const AoParams& params, Rng rng) {
  const auto& m = up.channels.elements_per_irs();
  PhaseConfig phases = params.init == PhaseInit::ones ? PhaseConfig::ones(m) : PhaseConfig::random(m, rng);
  return initialize_from(up, params, phases, rng);
}

void step(AoState& s, const Uplink& up, const AoParams& params) {
  const CascadedChannels& cc = up.channels;
  ++s.iteration;

  // A fresh receiver is optimal per user in exact arithmetic; the comparison
  // only guards against rounding so the trace stays monotone.
  const double before = min_sinr(cc, s.phases, s.beamformers.w, up.powers, up.noise_watts);
  BeamformerBank fresh = compute_beamformers(params.beamformer, effective_channel_matrix(cc, s.phases), up.powers,
                                             up.noise_watts);
  if (min_sinr(cc, s.phases, fresh.w, up.powers, up.noise_watts) >= before)
    s.beamformers = std::move(fresh);
  else
    ++s.stats.beamformer_rejections;

  if (params.optimize_phases) {
    const PhaseOptParams pp = params.phase_params();
    for (int l = 0; l < cc.num_irs(); ++l) {
      const IrsUpdate u = optimize_irs(l, cc, s.phases, s.beamformers.w, up.powers, up.noise_watts, pp, s.rng);
      ++s.stats.irs_updates;
      s.stats.solves += u.solves;
      s.stats.conic_iterations += u.conic_iterations;
      if (u.skipped) {
        ++s.stats.skipped;
        continue;
      }
      s.stats.gap_sum += u.gap;
      ++s.stats.gap_count;
      if (u.low_rank_flag) ++s.stats.low_rank;
      if (u.accepted) {
        ++s.stats.accepted;
        s.phases.theta[static_cast<std::size_t>(l)] = u.theta;
      }
    }
  }
  record(s, up);
}

namespace {

AoState iterate(AoState s, const Uplink& model, const AoParams& params) {
  while (true) {
    const double prev = s.gamma_min();
    step(s, model, params);
    if (std::abs(s.gamma_min() - prev) < params.xi || s.iteration >= params.max_iterations) break;
  }
  return s;
}

Uplink with_model(const Uplink& up, const AoParams& params) {
  return Uplink{optimizer_model(up.channels, params), up.powers, up.noise_watts};
}

}  // namespace

AoState run(const Uplink& up, const AoParams& params) {
  const Uplink model = with_model(up, params);
  return iterate(initialize(model, params, Rng(params.seed)), model, params);
}

AoState run(const Uplink& up, const AoParams& params, const PhaseConfig& warm) {
  const Uplink model = with_model(up, params);
  return iterate(initialize_from(model, params, warm, Rng(params.seed)), model, params);
}

}  // namespace mirs
