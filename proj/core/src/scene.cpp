// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#include "mirs/scene.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mirs {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Direction cosine of the link relative to an array laid along y.
double axis_cosine(const Point3& from, const Point3& to) {
  const double d = distance(from, to);
  return d > 0.0 ? (to.y - from.y) / d : 0.0;
}

CVec steering(Eigen::Index n, double cosine, double wavelength_m, double spacing_m) {
  CVec a(n);
  const double k = 2.0 * std::numbers::pi / wavelength_m;
  for (Eigen::Index m = 0; m < n; ++m) {
    a(m) = std::polar(1.0, -k * spacing_m * static_cast<double>(m) * cosine);
  }
  return a;
}

}  // namespace

double distance(const Point3& a, const Point3& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

void ScenarioConfig::validate() const {
  require(num_bs_antennas >= 1, "num_bs_antennas must be >= 1");
  require(num_irs >= 1, "num_irs must be >= 1");
  const auto L = static_cast<std::size_t>(num_irs);
  require(elements_per_irs.size() == L, "elements_per_irs must have num_irs entries");
  require(users_per_irs.size() == L, "users_per_irs must have num_irs entries");
  for (int m : elements_per_irs) require(m >= 1, "elements_per_irs entries must be >= 1");
  for (int k : users_per_irs) require(k >= 1, "users_per_irs entries must be >= 1");
  require(irs_positions.size() == L, "irs_positions must have num_irs entries");
  require(user_areas.size() == L, "user_areas must have num_irs entries");
  require(finite(bs_position), "bs_position must be finite");
  for (const auto& p : irs_positions) require(finite(p), "irs_positions must be finite");
  for (const auto& r : user_areas) {
    require(std::isfinite(r.x_min) && std::isfinite(r.x_max) && std::isfinite(r.y_min) &&
                std::isfinite(r.y_max) && r.x_min <= r.x_max && r.y_min <= r.y_max,
            "user_areas must be finite, non-inverted rectangles");
  }
  require(bs_height_m > 0.0 && irs_height_m > 0.0 && user_height_m > 0.0, "heights must be positive");
  require(std::isfinite(bs_height_m) && std::isfinite(irs_height_m) && std::isfinite(user_height_m),
          "heights must be finite");
  require(std::isfinite(tx_power_dbm), "tx_power_dbm must be finite");
  require(std::isfinite(bandwidth_hz) && bandwidth_hz > 0.0, "bandwidth_hz must be positive");
  require(std::isfinite(pathloss.reference_db) && std::isfinite(pathloss.los_exponent) &&
              std::isfinite(pathloss.nlos_exponent),
          "pathloss parameters must be finite");
  require(!std::isnan(rician_factor_db), "rician_factor_db must not be NaN");
  require(std::isfinite(gains.bs_dbi) && std::isfinite(gains.irs_dbi) && std::isfinite(gains.user_dbi),
          "antenna gains must be finite");
  require(secondary_cutoff_m >= 0.0, "secondary_cutoff_m must be >= 0");
  require(wavelength_m > 0.0 && element_spacing_m > 0.0, "wavelength_m and element_spacing_m must be positive");
}

int ScenarioConfig::total_users() const {
  int total = 0;
  for (int k : users_per_irs) total += k;
  return total;
}

double ScenarioConfig::noise_watts() const { return dbm_to_watts(noise_power_dbm(bandwidth_hz)); }

void apply_row_layout(ScenarioConfig& config, const RowLayout& row) {
  require(row.num_irs >= 1, "row layout needs at least one IRS");
  require(row.width_m > 0.0 && row.depth_m > 0.0, "row layout width and depth must be positive");
  config.num_irs = row.num_irs;
  config.irs_positions.clear();
  config.user_areas.clear();
  const double slab = row.width_m / row.num_irs;
  for (int l = 0; l < row.num_irs; ++l) {
    const double y = -0.5 * row.width_m + slab * (l + 0.5);
    config.irs_positions.push_back({row.distance_m, y});
    config.user_areas.push_back({row.distance_m, row.distance_m + row.depth_m, y - 0.5 * slab, y + 0.5 * slab});
  }
}

double noise_power_dbm(double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("noise_power_dbm: bandwidth must be positive");
  return -174.0 + 10.0 * std::log10(bandwidth_hz);
}

double pathloss_db(double distance_m, double exponent, double reference_db) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("pathloss_db: distance must be positive");
  return reference_db - 10.0 * exponent * std::log10(distance_m);
}

std::pair<double, double> rician_weights(double rician_factor_db) {
  if (std::isnan(rician_factor_db)) throw std::invalid_argument("rician_weights: factor is NaN");
  if (rician_factor_db == std::numeric_limits<double>::infinity()) return {1.0, 0.0};
  const double kappa = db_to_linear(rician_factor_db);
  return {std::sqrt(kappa / (1.0 + kappa)), std::sqrt(1.0 / (1.0 + kappa))};
}

CMat rician_matrix(Eigen::Index rows, Eigen::Index cols, double rician_factor_db, const CMat& los, Rng& rng) {
  if (los.rows() != rows || los.cols() != cols) {
    throw std::invalid_argument("rician_matrix: LOS component is " + std::to_string(los.rows()) + "x" +
                                std::to_string(los.cols()) + ", expected " + std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
  const auto [w_los, w_nlos] = rician_weights(rician_factor_db);
  CMat out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      out(r, c) = w_los * los(r, c) + w_nlos * rng.complex_normal();
    }
  }
  return out;
}

CMat los_response(const Point3& rx, Eigen::Index rx_elements, const Point3& tx, Eigen::Index tx_elements,
                  double wavelength_m, double spacing_m) {
  const double d = distance(rx, tx);
  const cplx bulk = std::polar(1.0, -2.0 * std::numbers::pi * d / wavelength_m);
  const CVec a_rx = steering(rx_elements, axis_cosine(rx, tx), wavelength_m, spacing_m);
  const CVec a_tx = steering(tx_elements, axis_cosine(tx, rx), wavelength_m, spacing_m);
  return bulk * a_rx * a_tx.transpose();
}

Scene sample_scene(const ScenarioConfig& config, Rng& rng) {
  config.validate();
  Scene scene;
  scene.bs = {config.bs_position.x, config.bs_position.y, config.bs_height_m};
  for (const auto& p : config.irs_positions) scene.irs.push_back({p.x, p.y, config.irs_height_m});
  scene.users.resize(static_cast<std::size_t>(config.num_irs));
  for (int l = 0; l < config.num_irs; ++l) {
    const auto& area = config.user_areas[static_cast<std::size_t>(l)];
    for (int k = 0; k < config.users_per_irs[static_cast<std::size_t>(l)]; ++k) {
      const double x = rng.uniform(area.x_min, area.x_max);
      const double y = rng.uniform(area.y_min, area.y_max);
      scene.users[static_cast<std::size_t>(l)].push_back({x, y, config.user_height_m});
    }
  }
  return scene;
}

RawChannels synth_channels(const Scene& scene, const ScenarioConfig& config, Rng& rng) {
  config.validate();
  const auto L = static_cast<std::size_t>(config.num_irs);
  const Eigen::Index N = config.num_bs_antennas;
  const auto& M = config.elements_per_irs;
  const auto& pl = config.pathloss;
  const double lam = config.wavelength_m;
  const double dx = config.element_spacing_m;

  auto amplitude = [&](const Point3& a, const Point3& b, double exponent, double gain_a, double gain_b) {
    return std::sqrt(db_to_linear(pathloss_db(distance(a, b), exponent, pl.reference_db) + gain_a + gain_b));
  };

  RawChannels raw;
  raw.g.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    const CMat los = los_response(scene.bs, N, scene.irs[l], M[l], lam, dx);
    const double amp = amplitude(scene.bs, scene.irs[l], pl.los_exponent, config.gains.bs_dbi, config.gains.irs_dbi);
    raw.g[l] = amp * rician_matrix(N, M[l], config.rician_factor_db, los, rng);
  }

  // One draw per unordered pair; the reverse direction is the transpose.
  raw.d.assign(L, std::vector<CMat>(L));
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t lp = l + 1; lp < L; ++lp) {
      const CMat los = los_response(scene.irs[l], M[l], scene.irs[lp], M[lp], lam, dx);
      const double amp =
          amplitude(scene.irs[l], scene.irs[lp], pl.los_exponent, config.gains.irs_dbi, config.gains.irs_dbi);
      raw.d[l][lp] = amp * rician_matrix(M[l], M[lp], config.rician_factor_db, los, rng);
      raw.d[lp][l] = raw.d[l][lp].transpose();
    }
  }

  const double neg_inf = -std::numeric_limits<double>::infinity();
  raw.u.assign(L, std::vector<std::vector<CVec>>(L));
  for (std::size_t lp = 0; lp < L; ++lp) {
    for (std::size_t l = 0; l < L; ++l) {
      for (const auto& user : scene.users[l]) {
        const double amp =
            amplitude(user, scene.irs[lp], pl.nlos_exponent, config.gains.user_dbi, config.gains.irs_dbi);
        const CMat ones = CMat::Ones(M[lp], 1);
        raw.u[lp][l].push_back(amp * rician_matrix(M[lp], 1, neg_inf, ones, rng).col(0));
      }
    }
  }
  return raw;
}

}  // namespace mirs
