// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#include "mirs/phaseopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mirs {

namespace {

constexpr int kMaxWidenings = 40;
constexpr double kLowRankRatio = 10.0;
constexpr double kGeometricFloor = 1e-9;

double trace_product(const CMat& a, const CMat& b) {
  // Re tr(A B) for Hermitian A, B.
  return (a.transpose().array() * b.array()).sum().real();
}

/// Nearest PSD Hermitian matrix rescaled to unit diagonal; empty if impossible.
std::optional<CMat> clean_psi(const CMat& raw) {
  const CMat herm = 0.5 * (raw + raw.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> eig(herm);
  const RVec vals = eig.eigenvalues().cwiseMax(0.0);
  CMat psd = eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().adjoint();
  const RVec diag = psd.diagonal().real();
  if ((diag.array() <= 0.0).any()) return std::nullopt;
  const RVec inv = diag.cwiseSqrt().cwiseInverse();
  psd = inv.asDiagonal() * psd * inv.asDiagonal();
  psd.diagonal().setOnes();
  return psd;
}

CMat lift(const CVec& theta) {
  CVec ext(theta.size() + 1);
  ext.head(theta.size()) = theta;
  ext(theta.size()) = 1.0;
  return ext * ext.adjoint();
}

}  // namespace

CMat build_b(const CVec& q, cplx qbar) {
  const Eigen::Index m = q.size();
  CMat b = CMat::Zero(m + 1, m + 1);
  b.topLeftCorner(m, m) = q * q.adjoint();
  b.topRightCorner(m, 1) = qbar * q;
  b.bottomLeftCorner(1, m) = std::conj(qbar) * q.adjoint();
  return b;
}

SdrSubproblem SdrSubproblem::from_coeffs(const ReducedCoeffs& coeffs) {
  SdrSubproblem sub;
  const int K = coeffs.num_users;
  const int M = coeffs.num_elements();
  sub.lbar = coeffs.lbar;
  sub.num_elements = M;
  sub.signal_const.resize(K);
  sub.interference_const.resize(K);
  sub.noise = coeffs.sigma2;
  for (int i = 0; i < K; ++i) {
    CMat interference = CMat::Zero(M + 1, M + 1);
    double other = 0.0;
    for (int c = 0; c < K; ++c) {
      const CVec q = coeffs.q(i, c);
      const cplx qbar = coeffs.q_bar(i, c);
      if (c == i) {
        sub.signal.push_back(build_b(q, qbar));
        sub.signal_const(i) = std::norm(qbar);
      } else {
        interference += build_b(q, qbar);
        other += std::norm(qbar);
      }
    }
    sub.interference.push_back(std::move(interference));
    sub.interference_const(i) = other + coeffs.sigma2(i);
  }
  return sub;
}

double SdrSubproblem::margin(int i, const CMat& psi, double delta) const {
  const auto at = static_cast<std::size_t>(i);
  const double num = trace_product(signal[at], psi) + signal_const(i);
  const double den = trace_product(interference[at], psi) + interference_const(i);
  return num - delta * den;
}

double SdrSubproblem::min_ratio(const CMat& psi) const {
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < num_users(); ++i) {
    const auto at = static_cast<std::size_t>(i);
    const double num = trace_product(signal[at], psi) + signal_const(i);
    const double den = trace_product(interference[at], psi) + interference_const(i);
    worst = std::min(worst, num / den);
  }
  return worst;
}

double SdrSubproblem::upper_bound() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < num_users(); ++i) {
    const CMat& s = signal[static_cast<std::size_t>(i)];
    double amp = std::sqrt(signal_const(i));
    for (int j = 0; j < num_elements; ++j) amp += std::sqrt(std::max(0.0, s(j, j).real()));
    best = std::min(best, amp * amp / noise(i));
  }
  return best;
}

conic::ConicProblem sdr_conic_problem(const SdrSubproblem& sub, double delta, RVec* row_scale) {
  const int n = sub.order();
  const int order = 2 * n;
  const int d = conic::svec_size(order);
  const int K = sub.num_users();
  const int t_col = d;

  conic::ConicProblem p;
  p.cones.zero = n;
  p.cones.nonneg = K;
  p.cones.psd = {order};
  p.c = RVec::Zero(d + 1);
  p.c(t_col) = -1.0;
  p.b = RVec::Zero(n + K + d);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(2 * n + K * (d + 1) + d));
  for (int j = 0; j < n; ++j) {
    trips.emplace_back(j, conic::svec_index(order, j, j), 0.5);
    trips.emplace_back(j, conic::svec_index(order, n + j, n + j), 0.5);
    p.b(j) = 1.0;
  }
  if (row_scale != nullptr) row_scale->resize(K);
  for (int i = 0; i < K; ++i) {
    const auto at = static_cast<std::size_t>(i);
    const CMat c = sub.signal[at] - delta * sub.interference[at];
    const RVec coef = 0.5 * conic::svec(conic::embed_hermitian(c));
    const double constant = sub.signal_const(i) - delta * sub.interference_const(i);
    double rho = std::max(coef.norm(), std::abs(constant));
    if (!(rho > 0.0)) rho = 1.0;
    if (row_scale != nullptr) (*row_scale)(i) = rho;
    const int row = n + i;
    for (int r = 0; r < d; ++r) {
      if (coef(r) != 0.0) trips.emplace_back(row, r, -coef(r) / rho);
    }
    trips.emplace_back(row, t_col, 1.0);
    p.b(row) = constant / rho;
  }
  for (int r = 0; r < d; ++r) trips.emplace_back(n + K + r, r, -1.0);
  p.a.resize(n + K + d, d + 1);
  p.a.setFromTriplets(trips.begin(), trips.end());
  return p;
}

FeasibilityResult sdr_feasible(const SdrSubproblem& sub, double delta, const SdrSettings& settings,
                               const conic::ConicSolution* warm) {
  if (!(delta >= 0.0)) throw std::invalid_argument("sdr_feasible: delta must be non-negative");
  const int n = sub.order();
  const int order = 2 * n;
  const int d = conic::svec_size(order);
  const int K = sub.num_users();

  RVec rho;
  const conic::ConicProblem problem = sdr_conic_problem(sub, delta, &rho);

  FeasibilityResult result;
  // Exact certificates checked while the solver runs: a cleaned primal
  // witness meeting every constraint, or a dual bound on the best slack below zero.
  auto monitor = [&](const conic::IterateView& view) {
    const CMat raw = conic::extract_hermitian(conic::smat(view.x.head(d), order));
    if (auto psi = clean_psi(raw)) {
      bool ok = true;
      for (int i = 0; i < K && ok; ++i) ok = sub.margin(i, *psi, delta) >= 0.0;
      if (ok) {
        result.feasible = true;
        result.certified = true;
        result.psi = std::move(*psi);
        return true;
      }
    }
    const RVec lambda = view.y.segment(n, K).cwiseMax(0.0);
    const double total = lambda.sum();
    if (total > 0.0) {
      CMat weighted = CMat::Zero(n, n);
      double bound = 0.0;
      for (int i = 0; i < K; ++i) {
        const double w = lambda(i) / (total * rho(i));
        if (w == 0.0) continue;
        const auto at = static_cast<std::size_t>(i);
        weighted += w * (sub.signal[at] - delta * sub.interference[at]);
        bound += w * (sub.signal_const(i) - delta * sub.interference_const(i));
      }
      const RVec nu = view.y.head(n) / total;
      weighted.diagonal() -= nu.cast<cplx>();
      Eigen::SelfAdjointEigenSolver<CMat> eig(weighted, Eigen::EigenvaluesOnly);
      bound += nu.sum() + n * eig.eigenvalues().maxCoeff();
      if (bound < 0.0) {
        result.feasible = false;
        result.certified = true;
        result.slack = bound;
        return true;
      }
    }
    return false;
  };

  conic::SolverSettings cs;
  cs.tol = settings.conic_tol;
  cs.max_iters = settings.conic_max_iters;
  cs.check_every = settings.check_every;
  cs.monitor = monitor;
  cs.warm_start = warm;
  result.solution = conic::solve(problem, cs);
  result.status = result.solution.status;
  result.iterations = result.solution.iterations;

  switch (result.status) {
    case conic::Status::stopped:
      if (result.feasible) result.slack = sub.min_ratio(result.psi) - delta;
      break;
    case conic::Status::optimal: {
      result.slack = result.solution.x(d);
      result.feasible = result.slack >= -settings.feas_tol;
      if (result.feasible) {
        const CMat raw = conic::extract_hermitian(conic::smat(result.solution.x.head(d), order));
        auto psi = clean_psi(raw);
        result.psi = psi ? *psi : CMat::Identity(n, n);
      }
      break;
    }
    default:
      result.feasible = false;
      break;
  }
  return result;
}

BisectionResult bisect_delta(const SdrSubproblem& sub, double delta_lo, const CMat& psi_lo, double delta_hi,
                             double tol, const SdrSettings& settings) {
  if (!(tol > 0.0)) throw std::invalid_argument("bisect_delta: tolerance must be positive");
  BisectionResult out;
  out.delta_star = std::max(0.0, delta_lo);
  out.psi = psi_lo;
  out.delta_hi = std::max(delta_hi, out.delta_star);
  if (!(out.delta_hi > 0.0)) return out;  // every numerator vanishes

  conic::ConicSolution warm;
  bool have_warm = false;
  int widenings = 0;
  while (out.delta_hi - out.delta_star > tol * out.delta_hi) {
    // Split geometrically while the bracket spans more than a factor of four.
    const double floor = std::max(out.delta_star, out.delta_hi * kGeometricFloor);
    const double mid = out.delta_hi > 4.0 * floor ? std::sqrt(floor * out.delta_hi)
                                                   : 0.5 * (out.delta_star + out.delta_hi);
    FeasibilityResult f = sdr_feasible(sub, mid, settings, settings.warm_start && have_warm ? &warm : nullptr);
    ++out.solves;
    out.conic_iterations += f.iterations;
    if (f.solution.status != conic::Status::infeasible && f.solution.x.size() > 0 &&
        std::isfinite(f.solution.x(0))) {
      warm = f.solution;
      have_warm = true;
    }
    if (f.feasible) {
      double reached = mid;
      if (f.certified) reached = std::max(mid, sub.min_ratio(f.psi));
      out.delta_star = reached;
      out.psi = std::move(f.psi);
      if (out.delta_star >= out.delta_hi) {
        if (++widenings > kMaxWidenings) {
          throw std::runtime_error("bisect_delta: upper bracket still feasible after repeated widening");
        }
        out.delta_hi = 2.0 * out.delta_star;
      }
    } else {
      out.delta_hi = mid;
    }
  }
  return out;
}

BisectionResult bisect_delta(const SdrSubproblem& sub, double tol, const SdrSettings& settings) {
  const CMat identity = CMat::Identity(sub.order(), sub.order());
  return bisect_delta(sub, 0.0, identity, sub.upper_bound(), tol, settings);
}

CVec dehomogenize(const CVec& v) {
  const Eigen::Index m = v.size() - 1;
  const double ref = std::abs(v(m)) > 0.0 ? std::arg(v(m)) : 0.0;
  CVec theta(m);
  for (Eigen::Index j = 0; j < m; ++j) theta(j) = std::polar(1.0, std::arg(v(j)) - ref);
  return theta;
}

double eigen_ratio(const CMat& psi) {
  Eigen::SelfAdjointEigenSolver<CMat> eig(0.5 * (psi + psi.adjoint()), Eigen::EigenvaluesOnly);
  const RVec& vals = eig.eigenvalues();
  const Eigen::Index n = vals.size();
  if (n < 2) return std::numeric_limits<double>::infinity();
  const double second = std::max(0.0, vals(n - 2));
  return second > 0.0 ? vals(n - 1) / second : std::numeric_limits<double>::infinity();
}

RandomizationResult randomize_rank1(const CMat& psi, const std::function<double(const CVec&)>& evaluator,
                                    int num_samples, Rng& rng, double delta_star) {
  const Eigen::Index n = psi.rows();
  const CMat herm = 0.5 * (psi + psi.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> eig(herm);

  RandomizationResult best;
  best.delta_star = delta_star;
  best.theta = dehomogenize(eig.eigenvectors().col(n - 1));
  best.achieved_min_sinr = evaluator(best.theta);
  best.samples_used = 1;

  CMat factor;
  Eigen::LLT<CMat> llt(herm + 1e-12 * CMat::Identity(n, n));
  if (llt.info() == Eigen::Success) {
    factor = llt.matrixL();
  } else {
    const RVec root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    factor = eig.eigenvectors() * root.asDiagonal();
  }

  CVec z(n);
  for (int s = 1; s <= num_samples; ++s) {
    for (Eigen::Index j = 0; j < n; ++j) z(j) = rng.complex_normal();
    CVec theta = dehomogenize(factor * z);
    const double value = evaluator(theta);
    ++best.samples_used;
    if (value > best.achieved_min_sinr) {
      best.achieved_min_sinr = value;
      best.theta = std::move(theta);
      best.best_index = s;
    }
  }
  best.gap = delta_star > 0.0 ? 1.0 - best.achieved_min_sinr / delta_star : 0.0;
  return best;
}

double min_sinr(const CascadedChannels& cc, const PhaseConfig& phases, const CMat& W,
                const PowerAllocation& powers, double noise) {
  const CMat H = effective_channel_matrix(cc, phases);
  return per_user_sinr(W, H, powers, noise).minCoeff();
}

IrsUpdate optimize_irs(int lbar, const CascadedChannels& cc, const PhaseConfig& phases, const CMat& W,
                       const PowerAllocation& powers, double noise, const PhaseOptParams& params, Rng& rng) {
  if (lbar < 0 || lbar >= cc.num_irs()) throw std::invalid_argument("optimize_irs: IRS index out of range");
  const auto at = static_cast<std::size_t>(lbar);

  IrsUpdate up;
  up.theta = phases.theta[at];
  up.objective_before = min_sinr(cc, phases, W, powers, noise);
  up.objective_after = up.objective_before;

  const ReducedCoeffs coeffs = reduced_coeffs(cc, phases, W, powers.watts, noise, lbar).normalized();
  const SdrSubproblem sub = SdrSubproblem::from_coeffs(coeffs);
  const CMat psi_inc = lift(phases.theta[at]);
  const double lo = sub.min_ratio(psi_inc);
  const double hi = sub.upper_bound();
  if (hi <= lo * (1.0 + params.epsilon)) {
    up.skipped = true;
    up.delta_star = lo;
    return up;
  }

  const BisectionResult bis = bisect_delta(sub, lo, psi_inc, hi, params.epsilon, params.sdr);
  up.delta_star = bis.delta_star;
  up.solves = bis.solves;
  up.conic_iterations = bis.conic_iterations;
  up.eigen_ratio = eigen_ratio(bis.psi);
  up.low_rank_flag = up.eigen_ratio < kLowRankRatio;

  auto evaluator = [&coeffs](const CVec& theta) { return sinr_reduced_all(theta, coeffs).minCoeff(); };
  const RandomizationResult rr = randomize_rank1(bis.psi, evaluator, params.randomizations, rng, bis.delta_star);
  up.gap = rr.gap;

  PhaseConfig candidate = phases;
  candidate.theta[at] = rr.theta;
  const double value = min_sinr(cc, candidate, W, powers, noise);
  if (value > up.objective_before) {
    up.theta = rr.theta;
    up.accepted = true;
    up.objective_after = value;
  }
  return up;
}

}  // namespace mirs
