// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#include "mirs/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mirs {

double PhaseConfig::modulus_error() const {
  double worst = 0.0;
  for (const auto& t : theta) {
    for (Eigen::Index j = 0; j < t.size(); ++j) worst = std::max(worst, std::abs(std::abs(t(j)) - 1.0));
  }
  return worst;
}

PhaseConfig PhaseConfig::ones(const std::vector<int>& elements_per_irs) {
  PhaseConfig p;
  for (int m : elements_per_irs) p.theta.push_back(CVec::Ones(m));
  return p;
}

PhaseConfig PhaseConfig::random(const std::vector<int>& elements_per_irs, Rng& rng) {
  PhaseConfig p;
  for (int m : elements_per_irs) {
    CVec t(m);
    for (int j = 0; j < m; ++j) t(j) = rng.unit_phase();
    p.theta.push_back(std::move(t));
  }
  return p;
}

bool CascadedChannels::pair_included(int lp, int l) const {
  if (!secondary_ || lp == l) return false;
  return mask_[idx(lp)][idx(l)];
}

CascadedChannels CascadedChannels::without_secondary() const {
  CascadedChannels out = *this;
  out.secondary_ = false;
  for (auto& row : out.mask_) std::fill(row.begin(), row.end(), false);
  for (auto& a : out.q_)
    for (auto& b : a)
      for (auto& c : b) c.clear();
  return out;
}

CascadedChannels build_cascaded(const RawChannels& raw, bool include_secondary, double cutoff_m,
                                const Scene& scene) {
  const std::size_t L = raw.g.size();
  CascadedChannels cc;
  cc.num_antennas_ = L > 0 ? static_cast<int>(raw.g[0].rows()) : 0;
  std::vector<int> users(L);
  for (std::size_t l = 0; l < L; ++l) {
    cc.elements_.push_back(static_cast<int>(raw.g[l].cols()));
    users[l] = static_cast<int>(raw.u[l][l].size());
  }
  cc.layout_ = GroupLayout(users);

  cc.mask_.assign(L, std::vector<bool>(L, false));
  bool any_pair = false;
  if (include_secondary) {
    for (std::size_t lp = 0; lp < L; ++lp) {
      for (std::size_t l = 0; l < L; ++l) {
        if (lp == l) continue;
        const bool keep = distance(scene.irs[lp], scene.irs[l]) <= cutoff_m;
        cc.mask_[lp][l] = keep;
        any_pair = any_pair || keep;
      }
    }
  }
  cc.secondary_ = any_pair;

  cc.r_.assign(L, std::vector<std::vector<CMat>>(L));
  cc.q_.assign(L, std::vector<std::vector<std::vector<CMat>>>(L));
  for (std::size_t lp = 0; lp < L; ++lp) {
    const CMat& g = raw.g[lp];
    for (std::size_t l = 0; l < L; ++l) {
      const std::size_t K = raw.u[lp][l].size();
      cc.r_[lp][l].reserve(K);
      cc.q_[lp][l].resize(K);
      for (std::size_t k = 0; k < K; ++k) {
        cc.r_[lp][l].push_back(g * raw.u[lp][l][k].asDiagonal());
        if (!cc.mask_[lp][l]) continue;
        const CMat& d = raw.d[lp][l];  // IRS l -> IRS lp
        const CVec& own = raw.u[l][l][k];
        auto& blocks = cc.q_[lp][l][k];
        blocks.reserve(static_cast<std::size_t>(own.size()));
        for (Eigen::Index j = 0; j < own.size(); ++j) {
          const CVec column = d.col(j) * own(j);
          blocks.push_back(g * column.asDiagonal());
        }
      }
    }
  }
  return cc;
}

namespace {

void check_user(const CascadedChannels& cc, const PhaseConfig& phases, int l, int k) {
  if (l < 0 || l >= cc.num_irs() || k < 0 || k >= cc.layout().users_in(l)) {
    throw std::invalid_argument("effective_channel: user (" + std::to_string(l) + "," + std::to_string(k) +
                                ") out of range");
  }
  if (phases.num_irs() != cc.num_irs()) {
    throw std::invalid_argument("effective_channel: phase configuration has wrong number of IRSs");
  }
}

}  // namespace

CVec effective_channel(const CascadedChannels& cc, const PhaseConfig& phases, int l, int k) {
  check_user(cc, phases, l, k);
  CVec h = CVec::Zero(cc.num_antennas());
  for (int lp = 0; lp < cc.num_irs(); ++lp) {
    h.noalias() += cc.r(lp, l, k) * phases.theta[static_cast<std::size_t>(lp)];
  }
  if (!cc.has_secondary()) return h;
  const CVec& own = phases.theta[static_cast<std::size_t>(l)];
  for (int lp = 0; lp < cc.num_irs(); ++lp) {
    if (!cc.pair_included(lp, l)) continue;
    const auto& blocks = cc.q(lp, l, k);
    const CVec& other = phases.theta[static_cast<std::size_t>(lp)];
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      h.noalias() += own(static_cast<Eigen::Index>(j)) * (blocks[j] * other);
    }
  }
  return h;
}

CMat effective_channel_matrix(const CascadedChannels& cc, const PhaseConfig& phases) {
  const auto& layout = cc.layout();
  CMat H(cc.num_antennas(), layout.total_users());
  for (int l = 0; l < layout.num_groups(); ++l) {
    for (int k = 0; k < layout.users_in(l); ++k) {
      H.col(layout.flat(l, k)) = effective_channel(cc, phases, l, k);
    }
  }
  return H;
}

}  // namespace mirs
