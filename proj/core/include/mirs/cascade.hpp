// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#pragma once

#include <limits>
#include <vector>

#include "mirs/scene.hpp"
#include "mirs/types.hpp"

namespace mirs {

/// Unit-modulus phase-shift vectors, one per IRS.
struct PhaseConfig {
  std::vector<CVec> theta;

  int num_irs() const noexcept { return static_cast<int>(theta.size()); }
  /// Largest | |theta_lj| - 1 | over all elements.
  double modulus_error() const;

  static PhaseConfig ones(const std::vector<int>& elements_per_irs);
  static PhaseConfig random(const std::vector<int>& elements_per_irs, Rng& rng);
};

/// Cascaded channels that make every effective channel linear in each
/// phase vector:
///
///   h_{l,k} = sum_lp R[lp][l][k] theta_lp
///           + sum_{lp != l, pair kept} sum_j Q[lp][l][k][j] theta_lp theta_{l,j}
///
/// R[lp][l][k] = G_lp diag(u[lp][l][k])                 (N x M_lp)
/// Q[lp][l][k][j] = G_lp diag(column j of D[lp][l] diag(u[l][l][k]))  (N x M_lp)
///
/// Immutable after construction.
class CascadedChannels {
 public:
  CascadedChannels() = default;

  int num_antennas() const noexcept { return num_antennas_; }
  int num_irs() const noexcept { return static_cast<int>(elements_.size()); }
  const std::vector<int>& elements_per_irs() const noexcept { return elements_; }
  int elements(int irs) const { return elements_.at(static_cast<std::size_t>(irs)); }
  const GroupLayout& layout() const noexcept { return layout_; }
  int total_users() const noexcept { return layout_.total_users(); }

  bool has_secondary() const noexcept { return secondary_; }
  /// True when the double bounce user(l) -> IRS l -> IRS lp -> BS is modeled.
  bool pair_included(int lp, int l) const;

  const CMat& r(int lp, int l, int k) const { return r_[idx(lp)][idx(l)][idx(k)]; }
  /// Q blocks for j = 0..M_l-1; empty when the pair is excluded.
  const std::vector<CMat>& q(int lp, int l, int k) const { return q_[idx(lp)][idx(l)][idx(k)]; }

  /// Copy with every secondary-reflection term dropped.
  CascadedChannels without_secondary() const;

  friend CascadedChannels build_cascaded(const RawChannels&, bool, double, const Scene&);

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

  int num_antennas_ = 0;
  std::vector<int> elements_;
  GroupLayout layout_;
  bool secondary_ = false;
  std::vector<std::vector<bool>> mask_;  // mask_[lp][l]
  std::vector<std::vector<std::vector<CMat>>> r_;
  std::vector<std::vector<std::vector<std::vector<CMat>>>> q_;
};

/// Precomputes R always, and Q for every IRS pair closer than `cutoff_m`
/// when `include_secondary` is set.
CascadedChannels build_cascaded(const RawChannels& raw, bool include_secondary,
                                double cutoff_m, const Scene& scene);

/// h_{l,k} for the given phases.
CVec effective_channel(const CascadedChannels& cc, const PhaseConfig& phases, int l, int k);

/// H = [h_{0,0}, ..., h_{L-1,K_{L-1}-1}], N x K, columns in GroupLayout order.
CMat effective_channel_matrix(const CascadedChannels& cc, const PhaseConfig& phases);

}  // namespace mirs
