// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#include "mirs/rng.hpp"

#include <cmath>
#include <numbers>

#include "mirs/types.hpp"

namespace mirs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::complex<double> Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::complex<double> Rng::unit_phase() {
  return std::polar(1.0, 2.0 * std::numbers::pi * uniform());
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(base);
  for (auto p : parts) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

GroupLayout::GroupLayout(std::vector<int> users_per_group) : users_(std::move(users_per_group)) {
  offsets_.reserve(users_.size());
  for (int n : users_) {
    if (n < 1) throw std::invalid_argument("GroupLayout: every group needs at least one user");
    offsets_.push_back(total_);
    total_ += n;
  }
}

int GroupLayout::flat(int group, int user) const {
  if (group < 0 || group >= num_groups() || user < 0 || user >= users_in(group)) {
    throw std::invalid_argument("GroupLayout: user (" + std::to_string(group) + "," +
                                std::to_string(user) + ") out of range");
  }
  return offsets_[static_cast<std::size_t>(group)] + user;
}

std::pair<int, int> GroupLayout::group_of(int flat_index) const {
  if (flat_index < 0 || flat_index >= total_) {
    throw std::invalid_argument("GroupLayout: flat index out of range");
  }
  int g = num_groups() - 1;
  while (offsets_[static_cast<std::size_t>(g)] > flat_index) --g;
  return {g, flat_index - offsets_[static_cast<std::size_t>(g)]};
}

}  // namespace mirs
