// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#pragma once

#include <string_view>

#include "mirs/types.hpp"

namespace mirs {

/// Transmit powers in watts, one per user in flat order.
struct PowerAllocation {
  RVec watts;

  static PowerAllocation uniform_dbm(int num_users, double dbm);
  int size() const noexcept { return static_cast<int>(watts.size()); }
  /// K x K diagonal of sqrt(P_{l,k}).
  RMat as_diagonal() const { return watts.cwiseSqrt().asDiagonal(); }
};

enum class BeamformerKind { mmse, zf, custom };

std::string_view to_string(BeamformerKind kind);
BeamformerKind beamformer_kind_from_string(std::string_view name);

struct BeamformerBank {
  CMat w;  // N x K, column per user
  BeamformerKind method = BeamformerKind::custom;
};

/// W = (H P P H^H + sigma^2 I)^{-1} H P with P = diag(sqrt(P_{l,k})),
/// evaluated through a Cholesky solve.
BeamformerBank mmse(const CMat& H, const PowerAllocation& powers, double noise);

/// Zero-forcing: W = H (H^H H)^{-1}, columns normalized to unit norm.
/// Throws SingularMatrixError when K > N or H is numerically rank deficient.
BeamformerBank zf(const CMat& H, const PowerAllocation& powers);

BeamformerBank compute_beamformers(BeamformerKind kind, const CMat& H, const PowerAllocation& powers,
                                   double noise);

/// SINR of every user for beamformers W (zero columns give zero SINR).
RVec per_user_sinr(const CMat& W, const CMat& H, const PowerAllocation& powers, double noise);

}  // namespace mirs
