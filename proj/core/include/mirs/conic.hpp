// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Sparse>

#include "mirs/types.hpp"

namespace mirs::conic {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Cone K as a product of blocks, in this row order:
/// zero cone {0}^zero, nonnegative orthant R+^nonneg, then one PSD cone per
/// entry of `psd` (matrix order n, occupying n(n+1)/2 rows in svec form).
struct ConeSpec {
  int zero = 0;
  int nonneg = 0;
  std::vector<int> psd;

  int rows() const;
};

/// minimize c^T x  subject to  A x + s = b,  s in K.
///
/// Dual: maximize -b^T y subject to A^T y + c = 0, y in K* (K is self-dual).
struct ConicProblem {
  RVec c;
  SpMat a;
  RVec b;
  ConeSpec cones;

  /// Throws std::invalid_argument on inconsistent dimensions.
  void validate() const;
};

enum class Status { optimal, infeasible, unbounded, max_iters, stopped };

std::string_view to_string(Status status);

struct ConicSolution {
  RVec x;
  RVec y;
  RVec s;
  Status status = Status::max_iters;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  double objective = 0.0;
  int iterations = 0;
};

/// Unscaled iterate handed to a monitor; x, y, s already divided by tau.
struct IterateView {
  int iteration = 0;
  const RVec& x;
  const RVec& y;
  const RVec& s;
};

struct SolverSettings {
  double tol = 1e-6;
  int max_iters = 50000;
  double alpha = 1.5;  // over-relaxation
  double scale = 1.0;  // data scaling after equilibration
  bool normalize = true;
  int check_every = 10;
  /// Optional early exit: return true to stop with Status::stopped.
  std::function<bool(const IterateView&)> monitor;
  /// Optional starting point (a previous solution of a problem with the same shape).
  const ConicSolution* warm_start = nullptr;
};

/// ADMM on the homogeneous self-dual embedding: one cached sparse LDL^T of
/// the KKT matrix, then alternating affine solves and cone projections.
ConicSolution solve(const ConicProblem& problem, const SolverSettings& settings = {});

/// Nearest PSD matrix in Frobenius norm (eigenvalue clipping). X is symmetrized first.
RMat project_psd(const RMat& X);

/// Lower-triangle, column-major vectorization with off-diagonals scaled by
/// sqrt(2), so that <svec(A), svec(B)> = trace(A B).
RVec svec(const RMat& X);
RMat smat(const RVec& v, int n);
inline int svec_size(int n) { return n * (n + 1) / 2; }
/// Position of entry (i, j), i >= j, inside svec of an n x n matrix.
int svec_index(int n, int i, int j);

/// Real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix.
RMat embed_hermitian(const CMat& X);
/// Inverse of embed_hermitian, averaging the redundant blocks.
CMat extract_hermitian(const RMat& X);

/// Writes the problem in a plain-text, CBF-like format (see README).
void write_problem(const ConicProblem& problem, std::ostream& out);

}  // namespace mirs::conic
