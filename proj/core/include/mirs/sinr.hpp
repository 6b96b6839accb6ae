// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#pragma once

#include "mirs/cascade.hpp"
#include "mirs/types.hpp"

namespace mirs {

/// SINR of user `i` (flat index) from effective channels and beamformers:
///
///   P_i |w_i^H h_i|^2 / (sum_{c != i} P_c |w_i^H h_c|^2 + sigma^2 w_i^H w_i)
///
/// Throws std::invalid_argument for a zero beamformer.
double sinr_direct(const CMat& W, const CMat& H, const RVec& powers, double noise, int i);

/// Splits h_{l,k} into pieces that are constant in theta_lbar.
///
/// For l == lbar:  h = (R + S) theta_lbar + U
/// For l != lbar:  h = (R + T) theta_lbar + (U + S theta_l)
///
/// with S column j = sum_{lp not in {lbar, l}} Q[lp][l][k][j] theta_lp (for
/// l == lbar the sum runs over lp != lbar), T = sum_j Q[lbar][l][k][j] theta_{l,j}
/// and U = sum_{lp != lbar} R[lp][l][k] theta_lp.
struct ReductionTerms {
  CMat s;  // N x M_l
  CMat t;  // N x M_lbar, zero when l == lbar
  CVec u;  // N
};

ReductionTerms reduction_terms(const CascadedChannels& cc, const PhaseConfig& phases, int lbar, int l, int k);

/// Per-pair coefficients of the SINRs as functions of theta_lbar alone.
///
/// For receiver i and transmitter c (flat indices),
///
///   sqrt(P_c) w_i^H h_c = q(i,c)^H theta_lbar + qbar(i,c)
///
/// so that gamma_i = |q(i,i)^H theta + qbar(i,i)|^2
///                 / (sum_{c != i} |q(i,c)^H theta + qbar(i,c)|^2 + sigma2(i)).
/// The rows of `conj_q` hold q(i,c)^H at row i*K + c, which lets a whole
/// candidate be evaluated with one matrix-vector product.
struct ReducedCoeffs {
  int lbar = 0;
  int num_users = 0;
  CMat conj_q;  // K*K x M_lbar
  CVec qbar;    // K*K
  RVec sigma2;  // K, sigma^2 ||w_i||^2

  Eigen::Index row(int receiver, int transmitter) const {
    return static_cast<Eigen::Index>(receiver) * num_users + transmitter;
  }
  CVec q(int receiver, int transmitter) const { return conj_q.row(row(receiver, transmitter)).adjoint(); }
  cplx q_bar(int receiver, int transmitter) const { return qbar(row(receiver, transmitter)); }
  int num_elements() const noexcept { return static_cast<int>(conj_q.cols()); }

  /// Scales every receiver's coefficients so that sigma2 becomes one; SINRs are unchanged.
  ReducedCoeffs normalized() const;
};

ReducedCoeffs reduced_coeffs(const CascadedChannels& cc, const PhaseConfig& phases, const CMat& W,
                             const RVec& powers, double noise, int lbar);

/// SINR of receiver `i` as a function of theta_lbar.
double sinr_reduced(const CVec& theta_lbar, const ReducedCoeffs& coeffs, int i);

/// All K SINRs for one candidate theta_lbar.
RVec sinr_reduced_all(const CVec& theta_lbar, const ReducedCoeffs& coeffs);

}  // namespace mirs
