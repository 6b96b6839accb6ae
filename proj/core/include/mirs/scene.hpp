// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "mirs/rng.hpp"
#include "mirs/types.hpp"

namespace mirs {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  bool operator==(const Point3&) const = default;
};

double distance(const Point3& a, const Point3& b);

/// Axis-aligned ground rectangle in which a user group is dropped.
struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  bool operator==(const Rect&) const = default;
};

struct PathlossModel {
  double reference_db = -30.0;  // loss at 1 m
  double los_exponent = 2.2;    // BS-IRS and IRS-IRS links
  double nlos_exponent = 3.0;   // user-IRS links
  bool operator==(const PathlossModel&) const = default;
};

struct AntennaGains {
  double bs_dbi = 5.0;
  double irs_dbi = 5.0;
  double user_dbi = 0.0;
  bool operator==(const AntennaGains&) const = default;
};

/// Everything needed to drop a cell and synthesize its channels.
///
/// Defaults follow the small-cell setup used throughout the examples in
/// `configs/`: 16 BS antennas, a row of IRSs 60 m from the BS spread over a
/// 40 m wide strip, groups in 20 m deep areas, heights 25/30/1.5 m.
struct ScenarioConfig {
  int num_bs_antennas = 16;
  int num_irs = 0;
  std::vector<int> elements_per_irs;
  std::vector<int> users_per_irs;

  Point2 bs_position{0.0, 0.0};
  std::vector<Point2> irs_positions;
  std::vector<Rect> user_areas;
  double bs_height_m = 25.0;
  double irs_height_m = 30.0;
  double user_height_m = 1.5;

  double tx_power_dbm = 30.0;
  double bandwidth_hz = 180e3;
  PathlossModel pathloss;
  double rician_factor_db = 5.0;
  AntennaGains gains;

  bool secondary_reflections = true;
  double secondary_cutoff_m = std::numeric_limits<double>::infinity();

  // Only used to shape the deterministic LOS phase ramps.
  double wavelength_m = 0.1;
  double element_spacing_m = 0.05;

  std::uint64_t rng_seed = 1;

  bool operator==(const ScenarioConfig&) const = default;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  GroupLayout layout() const { return GroupLayout(users_per_irs); }
  int total_users() const;
  double noise_watts() const;
  double tx_power_watts() const { return dbm_to_watts(tx_power_dbm); }
};

/// Geometry of a row deployment: `num_irs` surfaces at x = `distance_m`
/// evenly spread over a strip `width_m` wide, each serving a slab of the
/// strip `depth_m` deep behind it.
struct RowLayout {
  int num_irs = 4;
  double distance_m = 60.0;
  double width_m = 40.0;
  double depth_m = 20.0;
  bool operator==(const RowLayout&) const = default;
};

/// Fills irs_positions and user_areas of `config` for a row deployment.
void apply_row_layout(ScenarioConfig& config, const RowLayout& row);

struct Scene {
  Point3 bs;
  std::vector<Point3> irs;
  std::vector<std::vector<Point3>> users;  // users[l][k]
};

/// Physical links of one channel realization.
///
/// u[lp][l][k] : user (l,k) -> IRS lp, length M_lp
/// d[l][lp]    : IRS lp -> IRS l, M_l x M_lp (empty when l == lp)
/// g[l]        : IRS l -> BS, N x M_l
struct RawChannels {
  std::vector<std::vector<std::vector<CVec>>> u;
  std::vector<std::vector<CMat>> d;
  std::vector<CMat> g;
};

/// -174 dBm/Hz thermal floor integrated over the bandwidth.
double noise_power_dbm(double bandwidth_hz);

/// Large-scale loss in dB (a negative number): reference_db - 10 alpha log10(d).
double pathloss_db(double distance_m, double exponent, double reference_db = -30.0);

/// sqrt(k/(1+k)) LOS + sqrt(1/(1+k)) W with k the linear Rician factor and W
/// i.i.d. CN(0,1). Large-scale scaling is left to the caller.
CMat rician_matrix(Eigen::Index rows, Eigen::Index cols, double rician_factor_db, const CMat& los, Rng& rng);

/// Mixing weights (LOS, scattered) used by rician_matrix.
std::pair<double, double> rician_weights(double rician_factor_db);

/// Unit-modulus far-field LOS response between two uniform linear arrays
/// laid along the y axis.
CMat los_response(const Point3& rx, Eigen::Index rx_elements, const Point3& tx, Eigen::Index tx_elements,
                  double wavelength_m, double spacing_m);

Scene sample_scene(const ScenarioConfig& config, Rng& rng);

RawChannels synth_channels(const Scene& scene, const ScenarioConfig& config, Rng& rng);

}  // namespace mirs
