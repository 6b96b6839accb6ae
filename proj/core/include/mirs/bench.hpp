// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mirs/ao.hpp"
#include "mirs/scene.hpp"

namespace mirs {

/// How double bounces are treated at a sweep point.
///   managed   : modeled in the world and by the optimizer
///   unmanaged : present in the world, ignored by the optimizer; the final
///               (theta, W) is scored on the full channel
///   off       : removed from the world
enum class SecondaryMode { managed, unmanaged, off };

std::string_view to_string(SecondaryMode mode);
SecondaryMode secondary_mode_from_string(std::string_view name);

/// One IRS deployment. Empty positions mean "use the plan's row layout".
struct LayoutVariant {
  int num_irs = 0;
  std::vector<int> users_per_irs;
  std::vector<Point2> irs_positions;
  std::vector<Rect> user_areas;
  bool operator==(const LayoutVariant&) const = default;
};

struct ExperimentPlan {
  ScenarioConfig base;  // fully resolved, valid on its own
  RowLayout row;
  AoParams solver;
  std::vector<double> tx_power_dbm;
  std::vector<LayoutVariant> layouts;
  std::vector<int> elements_per_irs;  // 0 entry: keep the base/layout value
  std::vector<SecondaryMode> modes;
  int trials = 1;
  int threads = 1;
  bool record_wall_time = false;
  std::string output;

  bool operator==(const ExperimentPlan&) const = default;

  void validate() const;
};

/// Fully resolved configuration of one sweep point.
struct SweepPoint {
  int index = 0;     // position in the emission order
  int geometry = 0;  // (layout, elements) index; seeds depend on this only
  int layout = 0;
  int elements = 0;
  double tx_power_dbm = 0.0;
  SecondaryMode mode = SecondaryMode::managed;
  ScenarioConfig scenario;
  AoParams solver;
  std::string fingerprint;
};

/// Points ordered layout, elements, power, mode (mode varies fastest).
std::vector<SweepPoint> expand(const ExperimentPlan& plan);

/// Schema violation: names the offending key and its 1-based line (0 when unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, int line, const std::string& message);
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

ExperimentPlan parse_config(std::string_view text);
ExperimentPlan load_config(const std::string& path);
/// Canonical YAML that parses back to an equal plan.
std::string emit_config(const ExperimentPlan& plan);

/// Stable 64-bit FNV-1a digest, as 16 hex digits.
std::string fingerprint_of(std::string_view text);

struct ExperimentRecord {
  std::string fingerprint;
  std::uint64_t seed = 0;
  double ptx_dbm = 0.0;
  double min_rate = 0.0;
  double avg_rate = 0.0;
  int iters = 0;
  double gap = 0.0;
  double wall_ms = 0.0;

  int point = 0;  // not serialized
  int trial = 0;  // not serialized

  bool same_fields(const ExperimentRecord& other) const;
};

struct TrialFailure {
  int point = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string what;
};

struct ExperimentResult {
  std::vector<ExperimentRecord> records;
  std::vector<TrialFailure> failures;
};

/// seed = derive_seed(base, {geometry, trial}).
std::uint64_t trial_seed(std::uint64_t base, int geometry, int trial);

/// Digest of every raw channel coefficient (paired-seed checks).
std::string channel_fingerprint(const RawChannels& raw);

struct TrialRun {
  ExperimentRecord record;
  AoState state;
  RVec world_sinr;  // per user on the world channel
  std::string channel_digest;
};

/// Draws the drop of `trial` and runs the optimizer at `point`.
TrialRun run_trial(const SweepPoint& point, int trial, std::uint64_t base_seed, bool record_wall_time = false);

using ProgressFn = std::function<void(int done, int total)>;

/// Every (point, trial) pair on a pool of `threads` workers (0: one per
/// hardware thread). Records come back ordered by (point, trial) no matter
/// how the work was scheduled.
ExperimentResult run_experiment(const ExperimentPlan& plan, int threads, const ProgressFn& progress = {});
ExperimentResult run_experiment(const ExperimentPlan& plan);

/// Header plus one row per record, doubles in round-trip precision.
void emit_csv(const std::vector<ExperimentRecord>& records, std::ostream& out);
void write_csv(const std::vector<ExperimentRecord>& records, const std::string& path);
std::vector<ExperimentRecord> parse_csv(std::istream& in);

/// Side table mapping fingerprints to the sweep coordinates they stand for.
void emit_points(const std::vector<SweepPoint>& points, std::ostream& out);

/// iteration, gamma_min, rate per line.
void emit_trace(const std::vector<TraceRecord>& trace, std::ostream& out);

}  // namespace mirs
