// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mirs/beamform.hpp"
#include "mirs/cascade.hpp"
#include "mirs/conic.hpp"
#include "mirs/rng.hpp"
#include "mirs/sinr.hpp"

namespace mirs {

/// Lifted quadratic form of |q^H theta + qbar|^2:
///
///   B = [[q q^H, qbar q], [conj(qbar) q^H, 0]]
///
/// so that trace(B theta~ theta~^H) + |qbar|^2 = |q^H theta + qbar|^2 for
/// theta~ = [theta; 1].
CMat build_b(const CVec& q, cplx qbar);

/// Lifted per-IRS problem at a fixed beamformer bank.
///
/// For receiver i the SINR constraint at target delta reads
///
///   tr(S_i Psi) + s_i >= delta (tr(I_i Psi) + n_i)
///
/// where S_i = B(i,i), I_i = sum_{c != i} B(i,c), s_i = |qbar(i,i)|^2 and
/// n_i = sum_{c != i} |qbar(i,c)|^2 + sigma2(i).
struct SdrSubproblem {
  int lbar = 0;
  int num_elements = 0;  // M_lbar; Psi is (M+1) x (M+1)
  std::vector<CMat> signal;
  std::vector<CMat> interference;
  RVec signal_const;
  RVec interference_const;
  RVec noise;  // sigma2(i)

  static SdrSubproblem from_coeffs(const ReducedCoeffs& coeffs);

  int num_users() const noexcept { return static_cast<int>(signal.size()); }
  int order() const noexcept { return num_elements + 1; }
  /// Constraint value tr(S Psi) + s - delta (tr(I Psi) + n) of receiver i.
  double margin(int i, const CMat& psi, double delta) const;
  /// min_i (tr(S_i Psi) + s_i) / (tr(I_i Psi) + n_i).
  double min_ratio(const CMat& psi) const;
  /// Largest target any unit-diagonal Psi can reach: min_i (sum_j |q_j| + |qbar|)^2 / sigma2(i).
  double upper_bound() const;
};

struct SdrSettings {
  double conic_tol = 1e-6;
  int conic_max_iters = 50000;
  double feas_tol = 1e-7;
  int check_every = 25;
  bool warm_start = true;

  bool operator==(const SdrSettings&) const = default;
};

struct FeasibilityResult {
  bool feasible = false;
  bool certified = false;  // exact primal witness or dual bound, not just solver tolerance
  CMat psi;                // witness when feasible
  double slack = 0.0;
  conic::Status status = conic::Status::max_iters;
  int iterations = 0;
  conic::ConicSolution solution;
};

/// Conic form of: maximize t s.t. (constraint_i)/rho_i >= t, Psi PSD, diag(Psi) = 1,
/// with Psi embedded as a real symmetric matrix of order 2(M+1).
conic::ConicProblem sdr_conic_problem(const SdrSubproblem& sub, double delta, RVec* row_scale = nullptr);

/// Decides whether the relaxation admits a Psi at target `delta`. Solver
/// exhaustion is reported as infeasible.
FeasibilityResult sdr_feasible(const SdrSubproblem& sub, double delta, const SdrSettings& settings = {},
                               const conic::ConicSolution* warm = nullptr);

struct BisectionResult {
  double delta_star = 0.0;  // largest target with a witness
  double delta_hi = 0.0;    // smallest target found infeasible
  CMat psi;
  int solves = 0;
  int conic_iterations = 0;
};

/// Binary search for the largest feasible target (split in log scale while
/// the bracket is wider than a factor of four). `delta_lo` must be
/// feasible with witness `psi_lo`; `tol` is relative to delta_hi. A witness
/// lifts the lower end to the ratio it actually attains. If every probe up to
/// `delta_hi` is feasible the upper end is doubled (at most 40 times), then
/// std::runtime_error is thrown.
BisectionResult bisect_delta(const SdrSubproblem& sub, double delta_lo, const CMat& psi_lo, double delta_hi,
                             double tol, const SdrSettings& settings = {});

/// Overload starting from delta_lo = 0 with Psi = I and delta_hi = upper_bound().
BisectionResult bisect_delta(const SdrSubproblem& sub, double tol, const SdrSettings& settings = {});

struct RandomizationResult {
  CVec theta;
  double achieved_min_sinr = 0.0;
  double delta_star = 0.0;
  double gap = 0.0;  // 1 - achieved / delta_star
  int samples_used = 0;
  int best_index = 0;  // 0 is the principal eigenvector candidate
};

/// theta_j = exp(i arg(v_j / v_{M+1})) for a lifted vector v.
CVec dehomogenize(const CVec& v);

/// Gaussian randomization: the principal eigenvector plus `num_samples`
/// draws from CN(0, Psi), each mapped to unit modulus, scored by `evaluator`.
/// Ties keep the earliest candidate.
RandomizationResult randomize_rank1(const CMat& psi, const std::function<double(const CVec&)>& evaluator,
                                    int num_samples, Rng& rng, double delta_star = 0.0);

/// Ratio of the two largest eigenvalues of a Hermitian matrix (inf when rank one).
double eigen_ratio(const CMat& psi);

struct PhaseOptParams {
  double epsilon = 1e-3;  // relative bisection accuracy
  int randomizations = 1000;
  SdrSettings sdr;
};

struct IrsUpdate {
  CVec theta;
  bool accepted = false;
  double objective_before = 0.0;  // min SINR with the incumbent
  double objective_after = 0.0;   // min SINR with the returned theta
  double delta_star = 0.0;
  double gap = 0.0;
  double eigen_ratio = 0.0;
  bool low_rank_flag = false;  // eigen ratio below 10
  bool skipped = false;        // incumbent already within epsilon of the bound
  int solves = 0;
  int conic_iterations = 0;
};

/// Exact min SINR of all users for the given phases and beamformers.
double min_sinr(const CascadedChannels& cc, const PhaseConfig& phases, const CMat& W,
                const PowerAllocation& powers, double noise);

/// Re-optimizes theta_lbar with everything else fixed. Never returns a theta
/// that lowers the min SINR; ties keep the incumbent.
IrsUpdate optimize_irs(int lbar, const CascadedChannels& cc, const PhaseConfig& phases, const CMat& W,
                       const PowerAllocation& powers, double noise, const PhaseOptParams& params, Rng& rng);

}  // namespace mirs
