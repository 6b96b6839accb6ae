// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#include "mirs/conic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include <Eigen/SparseCholesky>

namespace mirs::conic {

namespace {

constexpr double kMinScale = 1e-4;
constexpr double kMaxScale = 1e4;
constexpr int kEquilibrationPasses = 10;

// y in K*: the zero cone's dual is free, the rest is self-dual.
void project_dual_cone(Eigen::Ref<RVec> y, const ConeSpec& cones) {
  Eigen::Index at = cones.zero;
  for (int i = 0; i < cones.nonneg; ++i, ++at) y(at) = std::max(0.0, y(at));
  for (int n : cones.psd) {
    const int len = svec_size(n);
    RVec block = y.segment(at, len);
    y.segment(at, len) = svec(project_psd(smat(block, n)));
    at += len;
  }
}

struct Scaling {
  RVec row;  // D
  RVec col;  // E
  double b = 1.0;
  double c = 1.0;
};

Scaling equilibrate(SpMat& a, RVec& b, RVec& c, const ConeSpec& cones, double scale, bool normalize) {
  Scaling sc;
  sc.row = RVec::Ones(a.rows());
  sc.col = RVec::Ones(a.cols());
  if (normalize) {
    for (int pass = 0; pass < kEquilibrationPasses; ++pass) {
      RVec rnorm = RVec::Zero(a.rows());
      RVec cnorm = RVec::Zero(a.cols());
      for (int j = 0; j < a.outerSize(); ++j) {
        for (SpMat::InnerIterator it(a, j); it; ++it) {
          const double v = std::abs(it.value());
          rnorm(it.row()) = std::max(rnorm(it.row()), v);
          cnorm(j) = std::max(cnorm(j), v);
        }
      }
      // A PSD block must be scaled by one scalar to stay a PSD cone.
      Eigen::Index at = cones.zero + cones.nonneg;
      for (int n : cones.psd) {
        const int len = svec_size(n);
        const double m = rnorm.segment(at, len).maxCoeff();
        rnorm.segment(at, len).setConstant(m);
        at += len;
      }
      RVec dr(a.rows());
      RVec dc(a.cols());
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        dr(i) = rnorm(i) > 0.0 ? 1.0 / std::sqrt(rnorm(i)) : 1.0;
      }
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        dc(j) = cnorm(j) > 0.0 ? 1.0 / std::sqrt(cnorm(j)) : 1.0;
      }
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        dr(i) = std::clamp(sc.row(i) * dr(i), kMinScale, kMaxScale) / sc.row(i);
      }
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        dc(j) = std::clamp(sc.col(j) * dc(j), kMinScale, kMaxScale) / sc.col(j);
      }
      for (int j = 0; j < a.outerSize(); ++j) {
        for (SpMat::InnerIterator it(a, j); it; ++it) it.valueRef() *= dr(it.row()) * dc(j);
      }
      sc.row = sc.row.cwiseProduct(dr);
      sc.col = sc.col.cwiseProduct(dc);
    }
  }
  b = sc.row.cwiseProduct(b);
  c = sc.col.cwiseProduct(c);
  const double nb = b.norm();
  const double nc = c.norm();
  sc.b = nb > 0.0 ? scale / std::max(nb, kMinScale) : 1.0;
  sc.c = nc > 0.0 ? scale / std::max(nc, kMinScale) : 1.0;
  b *= sc.b;
  c *= sc.c;
  return sc;
}

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double objective = 0.0;
};

Residuals residuals(const ConicProblem& p, const RVec& x, const RVec& y, const RVec& s) {
  Residuals r;
  const RVec ax = p.a * x;
  const RVec aty = p.a.transpose() * y;
  const double cx = p.c.dot(x);
  const double by = p.b.dot(y);
  r.primal = (ax + s - p.b).norm() / (1.0 + p.b.norm());
  r.dual = (aty + p.c).norm() / (1.0 + p.c.norm());
  r.gap = std::abs(cx + by) / (1.0 + std::abs(cx) + std::abs(by));
  r.objective = cx;
  return r;
}

}  // namespace

int ConeSpec::rows() const {
  int total = zero + nonneg;
  for (int n : psd) total += svec_size(n);
  return total;
}

void ConicProblem::validate() const {
  if (cones.zero < 0 || cones.nonneg < 0) {
    throw std::invalid_argument("ConicProblem: cone sizes must be non-negative");
  }
  for (int n : cones.psd) {
    if (n < 1) throw std::invalid_argument("ConicProblem: PSD cone order must be >= 1");
  }
  if (a.rows() != cones.rows()) {
    throw std::invalid_argument("ConicProblem: A has " + std::to_string(a.rows()) + " rows but the cones need " +
                                std::to_string(cones.rows()));
  }
  if (b.size() != a.rows()) throw std::invalid_argument("ConicProblem: b does not match the rows of A");
  if (c.size() != a.cols()) throw std::invalid_argument("ConicProblem: c does not match the columns of A");
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::optimal:
      return "optimal";
    case Status::infeasible:
      return "infeasible";
    case Status::unbounded:
      return "unbounded";
    case Status::max_iters:
      return "max_iters";
    case Status::stopped:
      return "stopped";
  }
  return "unknown";
}

int svec_index(int n, int i, int j) {
  // Columns 0..j-1 contribute n + (n-1) + ... entries.
  return j * n - j * (j - 1) / 2 + (i - j);
}

RVec svec(const RMat& X) {
  const int n = static_cast<int>(X.rows());
  RVec v(svec_size(n));
  int at = 0;
  for (int j = 0; j < n; ++j) {
    v(at++) = X(j, j);
    for (int i = j + 1; i < n; ++i) v(at++) = std::numbers::sqrt2 * 0.5 * (X(i, j) + X(j, i));
  }
  return v;
}

RMat smat(const RVec& v, int n) {
  RMat X(n, n);
  int at = 0;
  for (int j = 0; j < n; ++j) {
    X(j, j) = v(at++);
    for (int i = j + 1; i < n; ++i) {
      X(i, j) = X(j, i) = v(at++) / std::numbers::sqrt2;
    }
  }
  return X;
}

RMat project_psd(const RMat& X) {
  const RMat sym = 0.5 * (X + X.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> eig(sym);
  const RVec clipped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
}

RMat embed_hermitian(const CMat& X) {
  const Eigen::Index n = X.rows();
  RMat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = X.real();
  out.topRightCorner(n, n) = -X.imag();
  out.bottomLeftCorner(n, n) = X.imag();
  out.bottomRightCorner(n, n) = X.real();
  return out;
}

CMat extract_hermitian(const RMat& X) {
  const Eigen::Index n = X.rows() / 2;
  const RMat re = 0.5 * (X.topLeftCorner(n, n) + X.bottomRightCorner(n, n));
  const RMat im = 0.5 * (X.bottomLeftCorner(n, n) - X.topRightCorner(n, n));
  CMat out(n, n);
  out.real() = re;
  out.imag() = im;
  return out;
}

ConicSolution solve(const ConicProblem& problem, const SolverSettings& settings) {
  problem.validate();
  const Eigen::Index n = problem.a.cols();
  const Eigen::Index m = problem.a.rows();
  const ConeSpec& cones = problem.cones;

  SpMat a = problem.a;
  RVec b = problem.b;
  RVec c = problem.c;
  const Scaling sc = equilibrate(a, b, c, cones, settings.scale, settings.normalize);

  // Quasi-definite KKT [[I, A^T], [A, -I]]; lower triangle is what LDL^T reads.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(a.nonZeros() + n + m));
  for (Eigen::Index j = 0; j < n; ++j) trips.emplace_back(j, j, 1.0);
  for (int j = 0; j < a.outerSize(); ++j) {
    for (SpMat::InnerIterator it(a, j); it; ++it) trips.emplace_back(n + it.row(), j, it.value());
  }
  for (Eigen::Index i = 0; i < m; ++i) trips.emplace_back(n + i, n + i, -1.0);
  SpMat kkt(n + m, n + m);
  kkt.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt(kkt);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("conic::solve: KKT factorization failed");

  // M z = r with M = [[I, A^T], [-A, I]]  <=>  KKT [zx; zy] = [rx; -ry].
  RVec rhs(n + m);
  auto solve_m = [&](const RVec& rx, const RVec& ry, RVec& zx, RVec& zy) {
    rhs.head(n) = rx;
    rhs.tail(m) = -ry;
    const RVec z = ldlt.solve(rhs);
    zx = z.head(n);
    zy = z.tail(m);
  };
  RVec gx, gy;
  solve_m(c, b, gx, gy);
  const double denom = 1.0 + c.dot(gx) + b.dot(gy);

  RVec x = RVec::Zero(n);
  RVec y = RVec::Zero(m);
  RVec s = RVec::Zero(m);
  double tau = 1.0;
  double kappa = 0.0;
  if (settings.warm_start != nullptr && settings.warm_start->x.size() == n && settings.warm_start->y.size() == m &&
      settings.warm_start->s.size() == m) {
    const auto& w = *settings.warm_start;
    x = w.x.cwiseQuotient(sc.col) * sc.b;
    y = w.y.cwiseQuotient(sc.row) * sc.c;
    s = w.s.cwiseProduct(sc.row) * sc.b;
  }

  ConicSolution out;
  auto unscaled = [&](RVec& xo, RVec& yo, RVec& so, double t) {
    xo = sc.col.cwiseProduct(x) / (sc.b * t);
    yo = sc.row.cwiseProduct(y) / (sc.c * t);
    so = s.cwiseQuotient(sc.row) / (sc.b * t);
  };

  const double alpha = settings.alpha;
  const int check_every = std::max(1, settings.check_every);
  RVec zx, zy, ux(n), uy(m);
  for (int it = 1; it <= settings.max_iters; ++it) {
    // Affine step: (I + Q) u~ = u + v (the x-part of v stays zero).
    solve_m(x, y + s, zx, zy);
    const double w_tau = tau + kappa;
    const double tau_t = (w_tau + c.dot(zx) + b.dot(zy)) / denom;
    ux = zx - gx * tau_t;
    uy = zy - gy * tau_t;

    // Relaxed cone step.
    const RVec rx = alpha * ux + (1.0 - alpha) * x;
    const RVec ry = alpha * uy + (1.0 - alpha) * y;
    const double rt = alpha * tau_t + (1.0 - alpha) * tau;
    RVec y_next = ry - s;
    project_dual_cone(y_next, cones);
    const double tau_next = std::max(0.0, rt - kappa);
    s += y_next - ry;
    kappa += tau_next - rt;
    x = rx;
    y = std::move(y_next);
    tau = tau_next;

    const bool last = it == settings.max_iters;
    if (it % check_every != 0 && !last) continue;

    out.iterations = it;
    if (tau > 1e-12 * std::max(1.0, kappa)) {
      unscaled(out.x, out.y, out.s, tau);
      const Residuals r = residuals(problem, out.x, out.y, out.s);
      out.primal_residual = r.primal;
      out.dual_residual = r.dual;
      out.gap = r.gap;
      out.objective = r.objective;
      if (r.primal <= settings.tol && r.dual <= settings.tol && r.gap <= settings.tol) {
        out.status = Status::optimal;
        return out;
      }
      if (settings.monitor && settings.monitor(IterateView{it, out.x, out.y, out.s})) {
        out.status = Status::stopped;
        return out;
      }
    }

    // Certificates use the raw (un-normalized) iterate.
    RVec xr, yr, sr;
    unscaled(xr, yr, sr, 1.0);
    const double by = problem.b.dot(yr);
    if (by < 0.0) {
      const double res = (problem.a.transpose() * yr).norm() / -by;
      if (res <= settings.tol) {
        out.status = Status::infeasible;
        out.y = yr / -by;
        out.x = RVec::Constant(n, std::numeric_limits<double>::quiet_NaN());
        out.s = out.x.head(0);
        return out;
      }
    }
    const double cx = problem.c.dot(xr);
    if (cx < 0.0) {
      const double res = (problem.a * xr + sr).norm() / -cx;
      if (res <= settings.tol) {
        out.status = Status::unbounded;
        out.x = xr / -cx;
        out.s = sr / -cx;
        out.y = RVec::Constant(m, std::numeric_limits<double>::quiet_NaN());
        return out;
      }
    }
  }
  out.status = Status::max_iters;
  return out;
}

void write_problem(const ConicProblem& problem, std::ostream& out) {
  problem.validate();
  const auto prec = out.precision(17);
  out << "# mirs conic problem: minimize c'x s.t. b - A x in K\n";
  out << "VER\n1\n\n";
  out << "OBJSENSE\nMIN\n\n";
  out << "VAR\n" << problem.a.cols() << " 1\nF " << problem.a.cols() << "\n\n";
  int blocks = (problem.cones.zero > 0) + (problem.cones.nonneg > 0) + static_cast<int>(problem.cones.psd.size());
  out << "CON\n" << problem.a.rows() << " " << blocks << "\n";
  if (problem.cones.zero > 0) out << "L= " << problem.cones.zero << "\n";
  if (problem.cones.nonneg > 0) out << "L+ " << problem.cones.nonneg << "\n";
  for (int n : problem.cones.psd) out << "SVEC" << n << " " << svec_size(n) << "\n";
  out << "\n";
  int nnz_c = 0;
  for (Eigen::Index j = 0; j < problem.c.size(); ++j) nnz_c += problem.c(j) != 0.0;
  out << "OBJACOORD\n" << nnz_c << "\n";
  for (Eigen::Index j = 0; j < problem.c.size(); ++j) {
    if (problem.c(j) != 0.0) out << j << " " << problem.c(j) << "\n";
  }
  out << "\nACOORD\n" << problem.a.nonZeros() << "\n";
  for (int j = 0; j < problem.a.outerSize(); ++j) {
    for (SpMat::InnerIterator it(problem.a, j); it; ++it) {
      out << it.row() << " " << j << " " << -it.value() << "\n";
    }
  }
  int nnz_b = 0;
  for (Eigen::Index i = 0; i < problem.b.size(); ++i) nnz_b += problem.b(i) != 0.0;
  out << "\nBCOORD\n" << nnz_b << "\n";
  for (Eigen::Index i = 0; i < problem.b.size(); ++i) {
    if (problem.b(i) != 0.0) out << i << " " << problem.b(i) << "\n";
  }
  out.precision(prec);
}

}  // namespace mirs::conic
