// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#include "mirs/beamform.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace mirs {

namespace {

constexpr double kMaxConditionNumber = 1e12;

}  // namespace

PowerAllocation PowerAllocation::uniform_dbm(int num_users, double dbm) {
  return PowerAllocation{RVec::Constant(num_users, dbm_to_watts(dbm))};
}

std::string_view to_string(BeamformerKind kind) {
  switch (kind) {
    case BeamformerKind::mmse:
      return "mmse";
    case BeamformerKind::zf:
      return "zf";
    case BeamformerKind::custom:
      return "custom";
  }
  return "custom";
}

BeamformerKind beamformer_kind_from_string(std::string_view name) {
  if (name == "mmse") return BeamformerKind::mmse;
  if (name == "zf") return BeamformerKind::zf;
  if (name == "custom") return BeamformerKind::custom;
  throw std::invalid_argument("unknown beamformer '" + std::string(name) + "' (expected mmse or zf)");
}

BeamformerBank mmse(const CMat& H, const PowerAllocation& powers, double noise) {
  if (!(noise > 0.0)) throw std::invalid_argument("mmse: noise power must be positive");
  if (powers.size() != H.cols()) throw std::invalid_argument("mmse: one power per user column required");
  // Normalizing by sigma^2 keeps the system O(1) when the noise floor is ~1e-16 W.
  const RVec scaled = powers.watts / noise;
  CMat A = H * scaled.asDiagonal() * H.adjoint();
  A.diagonal().array() += 1.0;
  Eigen::LLT<CMat> llt(A);
  CMat rhs = H * powers.watts.cwiseSqrt().asDiagonal();
  rhs /= noise;
  BeamformerBank bank;
  bank.w = llt.solve(rhs);
  bank.method = BeamformerKind::mmse;
  return bank;
}

BeamformerBank zf(const CMat& H, const PowerAllocation& powers) {
  const Eigen::Index N = H.rows();
  const Eigen::Index K = H.cols();
  if (powers.size() != K) throw std::invalid_argument("zf: one power per user column required");
  if (K > N) {
    throw SingularMatrixError("zf: " + std::to_string(K) + " users exceed " + std::to_string(N) +
                                  " antennas; H^H H is singular (condition number inf)",
                              std::numeric_limits<double>::infinity());
  }
  Eigen::JacobiSVD<CMat> svd(H);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double smin = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
  const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxConditionNumber)) {
    std::ostringstream msg;
    msg << "zf: effective channel matrix is rank deficient (condition number " << cond << ")";
    throw SingularMatrixError(msg.str(), cond);
  }
  const CMat gram = H.adjoint() * H;
  BeamformerBank bank;
  bank.w = H * gram.llt().solve(CMat::Identity(K, K));
  for (Eigen::Index c = 0; c < K; ++c) bank.w.col(c).normalize();
  bank.method = BeamformerKind::zf;
  return bank;
}

BeamformerBank compute_beamformers(BeamformerKind kind, const CMat& H, const PowerAllocation& powers,
                                   double noise) {
  switch (kind) {
    case BeamformerKind::mmse:
      return mmse(H, powers, noise);
    case BeamformerKind::zf:
      return zf(H, powers);
    case BeamformerKind::custom:
      break;
  }
  throw std::invalid_argument("compute_beamformers: custom beamformers have no closed form");
}

RVec per_user_sinr(const CMat& W, const CMat& H, const PowerAllocation& powers, double noise) {
  const Eigen::Index K = H.cols();
  const CMat cross = W.adjoint() * H;  // (i, c) = w_i^H h_c
  RVec gamma(K);
  for (Eigen::Index i = 0; i < K; ++i) {
    const double signal = powers.watts(i) * std::norm(cross(i, i));
    double interference = 0.0;
    for (Eigen::Index c = 0; c < K; ++c) {
      if (c != i) interference += powers.watts(c) * std::norm(cross(i, c));
    }
    const double denom = interference + noise * W.col(i).squaredNorm();
    gamma(i) = denom > 0.0 ? signal / denom : 0.0;
  }
  return gamma;
}

}  // namespace mirs
