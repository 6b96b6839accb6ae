// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#include "mirs/sinr.hpp"

#include <cmath>
#include <string>

namespace mirs {

double sinr_direct(const CMat& W, const CMat& H, const RVec& powers, double noise, int i) {
  const auto w = W.col(i);
  const double wnorm2 = w.squaredNorm();
  if (!(wnorm2 > 0.0)) {
    throw std::invalid_argument("sinr_direct: beamformer of user " + std::to_string(i) + " is zero");
  }
  double signal = 0.0;
  double interference = 0.0;
  for (Eigen::Index c = 0; c < H.cols(); ++c) {
    const double term = powers(c) * std::norm(w.dot(H.col(c)));
    if (c == i) {
      signal = term;
    } else {
      interference += term;
    }
  }
  return signal / (interference + noise * wnorm2);
}

ReductionTerms reduction_terms(const CascadedChannels& cc, const PhaseConfig& phases, int lbar, int l, int k) {
  const int N = cc.num_antennas();
  const int L = cc.num_irs();
  const auto& theta = phases.theta;
  const auto at = [](int i) { return static_cast<std::size_t>(i); };

  ReductionTerms out;
  out.u = CVec::Zero(N);
  out.s = CMat::Zero(N, cc.elements(l));
  out.t = CMat::Zero(N, cc.elements(lbar));

  for (int lp = 0; lp < L; ++lp) {
    if (lp != lbar) out.u.noalias() += cc.r(lp, l, k) * theta[at(lp)];
  }
  for (int lp = 0; lp < L; ++lp) {
    if (lp == lbar || lp == l || !cc.pair_included(lp, l)) continue;
    const auto& blocks = cc.q(lp, l, k);
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      out.s.col(static_cast<Eigen::Index>(j)).noalias() += blocks[j] * theta[at(lp)];
    }
  }
  if (l != lbar && cc.pair_included(lbar, l)) {
    const auto& blocks = cc.q(lbar, l, k);
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      out.t += theta[at(l)](static_cast<Eigen::Index>(j)) * blocks[j];
    }
  }
  return out;
}

ReducedCoeffs ReducedCoeffs::normalized() const {
  ReducedCoeffs out = *this;
  for (int i = 0; i < num_users; ++i) {
    const double scale = 1.0 / std::sqrt(sigma2(i));
    out.conj_q.middleRows(row(i, 0), num_users) *= scale;
    out.qbar.segment(row(i, 0), num_users) *= scale;
    out.sigma2(i) = 1.0;
  }
  return out;
}

ReducedCoeffs reduced_coeffs(const CascadedChannels& cc, const PhaseConfig& phases, const CMat& W,
                             const RVec& powers, double noise, int lbar) {
  const auto& layout = cc.layout();
  const int K = layout.total_users();
  const int M = cc.elements(lbar);
  if (W.cols() != K || powers.size() != K) {
    throw std::invalid_argument("reduced_coeffs: beamformer/power dimensions do not match the user count");
  }
  ReducedCoeffs out;
  out.lbar = lbar;
  out.num_users = K;
  out.conj_q.resize(static_cast<Eigen::Index>(K) * K, M);
  out.qbar.resize(static_cast<Eigen::Index>(K) * K);
  out.sigma2.resize(K);
  for (int i = 0; i < K; ++i) out.sigma2(i) = noise * W.col(i).squaredNorm();

  for (int l = 0; l < layout.num_groups(); ++l) {
    for (int k = 0; k < layout.users_in(l); ++k) {
      const int c = layout.flat(l, k);
      const ReductionTerms terms = reduction_terms(cc, phases, lbar, l, k);
      CMat linear = cc.r(lbar, l, k);
      CVec offset = terms.u;
      if (l == lbar) {
        linear += terms.s;
      } else {
        linear += terms.t;
        offset.noalias() += terms.s * phases.theta[static_cast<std::size_t>(l)];
      }
      const double amp = std::sqrt(powers(c));
      // Row (i, c) of conj_q is sqrt(P_c) w_i^H linear.
      const CMat wl = amp * (W.adjoint() * linear);  // K x M
      const CVec wo = amp * (W.adjoint() * offset);  // K
      for (int i = 0; i < K; ++i) {
        out.conj_q.row(out.row(i, c)) = wl.row(i);
        out.qbar(out.row(i, c)) = wo(i);
      }
    }
  }
  return out;
}

RVec sinr_reduced_all(const CVec& theta_lbar, const ReducedCoeffs& coeffs) {
  const int K = coeffs.num_users;
  const CVec amplitude = coeffs.conj_q * theta_lbar + coeffs.qbar;
  RVec gamma(K);
  for (int i = 0; i < K; ++i) {
    double signal = 0.0;
    double interference = 0.0;
    for (int c = 0; c < K; ++c) {
      const double p = std::norm(amplitude(coeffs.row(i, c)));
      if (c == i) {
        signal = p;
      } else {
        interference += p;
      }
    }
    gamma(i) = signal / (interference + coeffs.sigma2(i));
  }
  return gamma;
}

double sinr_reduced(const CVec& theta_lbar, const ReducedCoeffs& coeffs, int i) {
  const int K = coeffs.num_users;
  const auto block = coeffs.conj_q.middleRows(coeffs.row(i, 0), K);
  const CVec amplitude = block * theta_lbar + coeffs.qbar.segment(coeffs.row(i, 0), K);
  double interference = 0.0;
  for (int c = 0; c < K; ++c) {
    if (c != i) interference += std::norm(amplitude(c));
  }
  return std::norm(amplitude(i)) / (interference + coeffs.sigma2(i));
}

}  // namespace mirs
