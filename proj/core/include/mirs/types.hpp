// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mirs {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Raised when a linear system is too ill-conditioned to solve reliably.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, double condition_number)
      : std::runtime_error(what), condition_number_(condition_number) {}
  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

/// Maps (group l, user k) pairs onto the flat column index used by H and W.
/// Users are ordered group-major: (0,0), (0,1), ..., (L-1, K_{L-1}-1).
class GroupLayout {
 public:
  GroupLayout() = default;
  explicit GroupLayout(std::vector<int> users_per_group);

  int num_groups() const noexcept { return static_cast<int>(users_.size()); }
  int users_in(int group) const { return users_.at(static_cast<std::size_t>(group)); }
  int total_users() const noexcept { return total_; }

  int flat(int group, int user) const;
  std::pair<int, int> group_of(int flat_index) const;
  const std::vector<int>& users_per_group() const noexcept { return users_; }

 private:
  std::vector<int> users_;
  std::vector<int> offsets_;
  int total_ = 0;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Achievable rate in bps/Hz.
inline double rate_of(double sinr) { return std::log2(1.0 + sinr); }

}  // namespace mirs
