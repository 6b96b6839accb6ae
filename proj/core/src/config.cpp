// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------
//
// YAML experiment plans. Every section is optional except `scenario`, and
// within it only `num_irs` is required; everything else falls back to the
// defaults of ScenarioConfig, AoParams and RowLayout.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mirs/bench.hpp"

namespace mirs {

ConfigError::ConfigError(const std::string& key, int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + key + ": " + message
                                  : key + ": " + message),
      key_(key),
      line_(line) {}

std::string_view to_string(SecondaryMode mode) {
  switch (mode) {
    case SecondaryMode::managed:
      return "managed";
    case SecondaryMode::unmanaged:
      return "unmanaged";
    case SecondaryMode::off:
      return "off";
  }
  return "managed";
}

SecondaryMode secondary_mode_from_string(std::string_view name) {
  if (name == "managed") return SecondaryMode::managed;
  if (name == "unmanaged") return SecondaryMode::unmanaged;
  if (name == "off") return SecondaryMode::off;
  throw std::invalid_argument("unknown secondary mode '" + std::string(name) + "'");
}

namespace {

int line_of(const YAML::Node& n) {
  if (!n || n.Mark().is_null()) return 0;
  return n.Mark().line + 1;
}

void check_keys(const YAML::Node& map, const std::string& section, const std::set<std::string>& allowed) {
  if (!map.IsMap()) throw ConfigError(section, line_of(map), "expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError(key, line_of(kv.first), "unknown key in '" + section + "'");
  }
}

template <class T>
T scalar(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) throw ConfigError(key, line_of(n), "expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key, line_of(n), "cannot parse '" + n.Scalar() + "'");
  }
}

template <class T>
void read(const YAML::Node& map, const std::string& key, T& out) {
  if (const YAML::Node n = map[key]) out = scalar<T>(n, key);
}

// Scalar or sequence of scalars.
template <class T>
std::vector<T> list(const YAML::Node& n, const std::string& key) {
  if (n.IsScalar()) return {scalar<T>(n, key)};
  if (!n.IsSequence()) throw ConfigError(key, line_of(n), "expected a scalar or a list");
  std::vector<T> out;
  for (const auto& e : n) out.push_back(scalar<T>(e, key));
  if (out.empty()) throw ConfigError(key, line_of(n), "list must not be empty");
  return out;
}

std::vector<double> fixed(const YAML::Node& n, const std::string& key, std::size_t size) {
  if (!n.IsSequence() || n.size() != size)
    throw ConfigError(key, line_of(n), "expected a list of " + std::to_string(size) + " numbers");
  std::vector<double> out;
  for (const auto& e : n) out.push_back(scalar<double>(e, key));
  return out;
}

Point2 point(const YAML::Node& n, const std::string& key) {
  const auto v = fixed(n, key, 2);
  return {v[0], v[1]};
}

std::vector<Point2> points(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) throw ConfigError(key, line_of(n), "expected a list of [x, y] pairs");
  std::vector<Point2> out;
  for (const auto& e : n) out.push_back(point(e, key));
  return out;
}

std::vector<Rect> rects(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) throw ConfigError(key, line_of(n), "expected a list of [x_min, x_max, y_min, y_max]");
  std::vector<Rect> out;
  for (const auto& e : n) {
    const auto v = fixed(e, key, 4);
    out.push_back({v[0], v[1], v[2], v[3]});
  }
  return out;
}

// Broadcasts a single value to `count` entries.
std::vector<int> per_irs(const std::vector<int>& v, int count, const std::string& key, int line) {
  if (v.size() == 1) return std::vector<int>(static_cast<std::size_t>(count), v[0]);
  if (v.size() != static_cast<std::size_t>(count))
    throw ConfigError(key, line, "needs one entry or num_irs entries");
  return v;
}

// Maps ScenarioConfig::validate messages back to the key they name.
[[noreturn]] void rethrow_invalid(const std::invalid_argument& e, const YAML::Node& section) {
  std::string msg = e.what();
  const std::string key = msg.substr(0, msg.find(' '));
  const YAML::Node n = section[key];
  throw ConfigError(key, n ? line_of(n) : line_of(section), msg);
}

void parse_scenario(const YAML::Node& s, ExperimentPlan& plan) {
  check_keys(s, "scenario",
             {"num_irs", "num_bs_antennas", "elements_per_irs", "users_per_irs", "bs_position", "irs_positions",
              "user_areas", "row_layout", "bs_height_m", "irs_height_m", "user_height_m", "tx_power_dbm",
              "bandwidth_hz", "pathloss", "rician_factor_db", "gains", "secondary_reflections",
              "secondary_cutoff_m", "wavelength_m", "element_spacing_m", "seed"});
  ScenarioConfig& c = plan.base;
  if (!s["num_irs"]) throw ConfigError("num_irs", line_of(s), "required key is missing");
  read(s, "num_irs", c.num_irs);
  if (c.num_irs < 1) throw ConfigError("num_irs", line_of(s["num_irs"]), "must be >= 1");
  read(s, "num_bs_antennas", c.num_bs_antennas);

  std::vector<int> m{64}, k{3};
  if (s["elements_per_irs"]) m = list<int>(s["elements_per_irs"], "elements_per_irs");
  if (s["users_per_irs"]) k = list<int>(s["users_per_irs"], "users_per_irs");
  c.elements_per_irs = per_irs(m, c.num_irs, "elements_per_irs", line_of(s["elements_per_irs"]));
  c.users_per_irs = per_irs(k, c.num_irs, "users_per_irs", line_of(s["users_per_irs"]));

  if (s["bs_position"]) c.bs_position = point(s["bs_position"], "bs_position");
  if (const YAML::Node r = s["row_layout"]) {
    check_keys(r, "row_layout", {"distance_m", "width_m", "depth_m"});
    read(r, "distance_m", plan.row.distance_m);
    read(r, "width_m", plan.row.width_m);
    read(r, "depth_m", plan.row.depth_m);
  }
  const bool has_pos = static_cast<bool>(s["irs_positions"]);
  const bool has_areas = static_cast<bool>(s["user_areas"]);
  if (has_pos != has_areas)
    throw ConfigError(has_pos ? "user_areas" : "irs_positions", line_of(s),
                      "irs_positions and user_areas must be given together");
  if (has_pos) {
    c.irs_positions = points(s["irs_positions"], "irs_positions");
    c.user_areas = rects(s["user_areas"], "user_areas");
  } else {
    RowLayout row = plan.row;
    row.num_irs = c.num_irs;
    try {
      apply_row_layout(c, row);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("row_layout", line_of(s["row_layout"]), e.what());
    }
  }

  read(s, "bs_height_m", c.bs_height_m);
  read(s, "irs_height_m", c.irs_height_m);
  read(s, "user_height_m", c.user_height_m);
  read(s, "tx_power_dbm", c.tx_power_dbm);
  read(s, "bandwidth_hz", c.bandwidth_hz);
  if (const YAML::Node p = s["pathloss"]) {
    check_keys(p, "pathloss", {"reference_db", "los_exponent", "nlos_exponent"});
    read(p, "reference_db", c.pathloss.reference_db);
    read(p, "los_exponent", c.pathloss.los_exponent);
    read(p, "nlos_exponent", c.pathloss.nlos_exponent);
  }
  read(s, "rician_factor_db", c.rician_factor_db);
  if (const YAML::Node g = s["gains"]) {
    check_keys(g, "gains", {"bs_dbi", "irs_dbi", "user_dbi"});
    read(g, "bs_dbi", c.gains.bs_dbi);
    read(g, "irs_dbi", c.gains.irs_dbi);
    read(g, "user_dbi", c.gains.user_dbi);
  }
  read(s, "secondary_reflections", c.secondary_reflections);
  read(s, "secondary_cutoff_m", c.secondary_cutoff_m);
  read(s, "wavelength_m", c.wavelength_m);
  read(s, "element_spacing_m", c.element_spacing_m);
  read(s, "seed", c.rng_seed);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    rethrow_invalid(e, s);
  }
}

void parse_solver(const YAML::Node& s, AoParams& p) {
  check_keys(s, "solver",
             {"xi", "epsilon", "max_iterations", "randomizations", "beamformer", "init", "conic_tol",
              "conic_max_iters", "feas_tol", "check_every", "warm_start"});
  read(s, "xi", p.xi);
  read(s, "epsilon", p.epsilon);
  read(s, "max_iterations", p.max_iterations);
  read(s, "randomizations", p.randomizations);
  try {
    if (s["beamformer"]) p.beamformer = beamformer_kind_from_string(scalar<std::string>(s["beamformer"], "beamformer"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("beamformer", line_of(s["beamformer"]), e.what());
  }
  try {
    if (s["init"]) p.init = phase_init_from_string(scalar<std::string>(s["init"], "init"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("init", line_of(s["init"]), e.what());
  }
  read(s, "conic_tol", p.sdr.conic_tol);
  read(s, "conic_max_iters", p.sdr.conic_max_iters);
  read(s, "feas_tol", p.sdr.feas_tol);
  read(s, "check_every", p.sdr.check_every);
  read(s, "warm_start", p.sdr.warm_start);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    rethrow_invalid(e, s);
  }
  if (!(p.sdr.conic_tol > 0.0) || p.sdr.conic_max_iters < 1 || p.sdr.check_every < 1 || !(p.sdr.feas_tol >= 0.0))
    throw ConfigError("solver", line_of(s), "conic settings must be positive");
}

LayoutVariant parse_layout(const YAML::Node& n) {
  check_keys(n, "layouts", {"num_irs", "users_per_irs", "irs_positions", "user_areas"});
  LayoutVariant v;
  if (!n["num_irs"]) throw ConfigError("num_irs", line_of(n), "required key is missing in layout");
  read(n, "num_irs", v.num_irs);
  if (v.num_irs < 1) throw ConfigError("num_irs", line_of(n["num_irs"]), "must be >= 1");
  std::vector<int> k{3};
  if (n["users_per_irs"]) k = list<int>(n["users_per_irs"], "users_per_irs");
  v.users_per_irs = per_irs(k, v.num_irs, "users_per_irs", line_of(n["users_per_irs"]));
  for (int u : v.users_per_irs)
    if (u < 1) throw ConfigError("users_per_irs", line_of(n["users_per_irs"]), "entries must be >= 1");
  if (static_cast<bool>(n["irs_positions"]) != static_cast<bool>(n["user_areas"]))
    throw ConfigError("irs_positions", line_of(n), "irs_positions and user_areas must be given together");
  if (n["irs_positions"]) {
    v.irs_positions = points(n["irs_positions"], "irs_positions");
    v.user_areas = rects(n["user_areas"], "user_areas");
    if (v.irs_positions.size() != static_cast<std::size_t>(v.num_irs) || v.user_areas.size() != v.irs_positions.size())
      throw ConfigError("irs_positions", line_of(n["irs_positions"]), "needs num_irs entries");
  }
  return v;
}

void parse_sweep(const YAML::Node& s, ExperimentPlan& plan) {
  check_keys(s, "sweep", {"tx_power_dbm", "layouts", "elements_per_irs", "secondary"});
  if (s["tx_power_dbm"]) plan.tx_power_dbm = list<double>(s["tx_power_dbm"], "tx_power_dbm");
  if (const YAML::Node l = s["layouts"]) {
    if (!l.IsSequence() || l.size() == 0) throw ConfigError("layouts", line_of(l), "expected a non-empty list");
    plan.layouts.clear();
    for (const auto& e : l) plan.layouts.push_back(parse_layout(e));
  }
  if (s["elements_per_irs"]) {
    plan.elements_per_irs = list<int>(s["elements_per_irs"], "elements_per_irs");
    for (int m : plan.elements_per_irs)
      if (m < 1) throw ConfigError("elements_per_irs", line_of(s["elements_per_irs"]), "entries must be >= 1");
  }
  if (const YAML::Node m = s["secondary"]) {
    plan.modes.clear();
    for (const auto& name : list<std::string>(m, "secondary")) {
      try {
        plan.modes.push_back(secondary_mode_from_string(name));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("secondary", line_of(m), e.what());
      }
    }
  }
}

// ---- emission --------------------------------------------------------------

void emit_point(YAML::Emitter& out, const Point2& p) {
  out << YAML::Flow << YAML::BeginSeq << p.x << p.y << YAML::EndSeq;
}

void emit_positions(YAML::Emitter& out, const std::vector<Point2>& pos, const std::vector<Rect>& areas) {
  out << YAML::Key << "irs_positions" << YAML::Value << YAML::BeginSeq;
  for (const auto& p : pos) emit_point(out, p);
  out << YAML::EndSeq;
  out << YAML::Key << "user_areas" << YAML::Value << YAML::BeginSeq;
  for (const auto& r : areas)
    out << YAML::Flow << YAML::BeginSeq << r.x_min << r.x_max << r.y_min << r.y_max << YAML::EndSeq;
  out << YAML::EndSeq;
}

void emit_ints(YAML::Emitter& out, const char* key, const std::vector<int>& v) {
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (int x : v) out << x;
  out << YAML::EndSeq;
}

void emit_scenario(YAML::Emitter& out, const ScenarioConfig& c, const RowLayout& row) {
  out << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "num_irs" << YAML::Value << c.num_irs;
  out << YAML::Key << "num_bs_antennas" << YAML::Value << c.num_bs_antennas;
  emit_ints(out, "elements_per_irs", c.elements_per_irs);
  emit_ints(out, "users_per_irs", c.users_per_irs);
  out << YAML::Key << "bs_position" << YAML::Value;
  emit_point(out, c.bs_position);
  out << YAML::Key << "row_layout" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "distance_m" << YAML::Value << row.distance_m;
  out << YAML::Key << "width_m" << YAML::Value << row.width_m;
  out << YAML::Key << "depth_m" << YAML::Value << row.depth_m;
  out << YAML::EndMap;
  emit_positions(out, c.irs_positions, c.user_areas);
  out << YAML::Key << "bs_height_m" << YAML::Value << c.bs_height_m;
  out << YAML::Key << "irs_height_m" << YAML::Value << c.irs_height_m;
  out << YAML::Key << "user_height_m" << YAML::Value << c.user_height_m;
  out << YAML::Key << "tx_power_dbm" << YAML::Value << c.tx_power_dbm;
  out << YAML::Key << "bandwidth_hz" << YAML::Value << c.bandwidth_hz;
  out << YAML::Key << "pathloss" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "reference_db" << YAML::Value << c.pathloss.reference_db;
  out << YAML::Key << "los_exponent" << YAML::Value << c.pathloss.los_exponent;
  out << YAML::Key << "nlos_exponent" << YAML::Value << c.pathloss.nlos_exponent;
  out << YAML::EndMap;
  out << YAML::Key << "rician_factor_db" << YAML::Value << c.rician_factor_db;
  out << YAML::Key << "gains" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "bs_dbi" << YAML::Value << c.gains.bs_dbi;
  out << YAML::Key << "irs_dbi" << YAML::Value << c.gains.irs_dbi;
  out << YAML::Key << "user_dbi" << YAML::Value << c.gains.user_dbi;
  out << YAML::EndMap;
  out << YAML::Key << "secondary_reflections" << YAML::Value << c.secondary_reflections;
  out << YAML::Key << "secondary_cutoff_m" << YAML::Value << c.secondary_cutoff_m;
  out << YAML::Key << "wavelength_m" << YAML::Value << c.wavelength_m;
  out << YAML::Key << "element_spacing_m" << YAML::Value << c.element_spacing_m;
  out << YAML::Key << "seed" << YAML::Value << c.rng_seed;
  out << YAML::EndMap;
}

void emit_solver(YAML::Emitter& out, const AoParams& p) {
  out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "xi" << YAML::Value << p.xi;
  out << YAML::Key << "epsilon" << YAML::Value << p.epsilon;
  out << YAML::Key << "max_iterations" << YAML::Value << p.max_iterations;
  out << YAML::Key << "randomizations" << YAML::Value << p.randomizations;
  out << YAML::Key << "beamformer" << YAML::Value << std::string(to_string(p.beamformer));
  out << YAML::Key << "init" << YAML::Value << std::string(to_string(p.init));
  out << YAML::Key << "conic_tol" << YAML::Value << p.sdr.conic_tol;
  out << YAML::Key << "conic_max_iters" << YAML::Value << p.sdr.conic_max_iters;
  out << YAML::Key << "feas_tol" << YAML::Value << p.sdr.feas_tol;
  out << YAML::Key << "check_every" << YAML::Value << p.sdr.check_every;
  out << YAML::Key << "warm_start" << YAML::Value << p.sdr.warm_start;
  out << YAML::EndMap;
}

void begin(YAML::Emitter& out) {
  out.SetDoublePrecision(17);
  out.SetBoolFormat(YAML::TrueFalseBool);
}

}  // namespace

void ExperimentPlan::validate() const {
  base.validate();
  solver.validate();
  if (tx_power_dbm.empty()) throw std::invalid_argument("sweep tx_power_dbm must not be empty");
  if (layouts.empty()) throw std::invalid_argument("sweep layouts must not be empty");
  if (elements_per_irs.empty()) throw std::invalid_argument("sweep elements_per_irs must not be empty");
  if (modes.empty()) throw std::invalid_argument("sweep secondary must not be empty");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  for (double p : tx_power_dbm)
    if (!std::isfinite(p)) throw std::invalid_argument("sweep tx_power_dbm entries must be finite");
}

ExperimentPlan parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError("document", e.mark.line + 1, e.msg);
  }
  if (!root || root.IsNull()) throw ConfigError("scenario", 0, "empty document");
  check_keys(root, "document", {"scenario", "solver", "sweep", "trials", "threads", "record_wall_time", "output"});
  if (!root["scenario"]) throw ConfigError("scenario", line_of(root), "required section is missing");

  ExperimentPlan plan;
  parse_scenario(root["scenario"], plan);
  if (root["solver"]) parse_solver(root["solver"], plan.solver);

  plan.tx_power_dbm = {plan.base.tx_power_dbm};
  plan.layouts = {LayoutVariant{plan.base.num_irs, plan.base.users_per_irs, plan.base.irs_positions,
                                plan.base.user_areas}};
  plan.elements_per_irs = {0};
  plan.modes = {SecondaryMode::managed};
  if (root["sweep"]) parse_sweep(root["sweep"], plan);

  read(root, "trials", plan.trials);
  if (plan.trials < 1) throw ConfigError("trials", line_of(root["trials"]), "must be >= 1");
  read(root, "threads", plan.threads);
  if (plan.threads < 0) throw ConfigError("threads", line_of(root["threads"]), "must be >= 0");
  read(root, "record_wall_time", plan.record_wall_time);
  read(root, "output", plan.output);

  // Catch layout/element combinations that cannot be resolved.
  try {
    expand(plan);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("sweep", line_of(root["sweep"]), e.what());
  }
  return plan;
}

ExperimentPlan load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", 0, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const ExperimentPlan& plan) {
  YAML::Emitter out;
  begin(out);
  out << YAML::BeginMap;
  emit_scenario(out, plan.base, plan.row);
  emit_solver(out, plan.solver);
  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "tx_power_dbm" << YAML::Value << YAML::Flow << plan.tx_power_dbm;
  out << YAML::Key << "layouts" << YAML::Value << YAML::BeginSeq;
  for (const auto& v : plan.layouts) {
    out << YAML::BeginMap;
    out << YAML::Key << "num_irs" << YAML::Value << v.num_irs;
    emit_ints(out, "users_per_irs", v.users_per_irs);
    if (!v.irs_positions.empty()) emit_positions(out, v.irs_positions, v.user_areas);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  // A zero entry ("keep") is not expressible in the document; omit the key.
  const bool keep = plan.elements_per_irs.size() == 1 && plan.elements_per_irs[0] == 0;
  if (!keep) emit_ints(out, "elements_per_irs", plan.elements_per_irs);
  out << YAML::Key << "secondary" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto m : plan.modes) out << std::string(to_string(m));
  out << YAML::EndSeq;
  out << YAML::EndMap;
  out << YAML::Key << "trials" << YAML::Value << plan.trials;
  out << YAML::Key << "threads" << YAML::Value << plan.threads;
  out << YAML::Key << "record_wall_time" << YAML::Value << plan.record_wall_time;
  out << YAML::Key << "output" << YAML::Value << plan.output;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string fingerprint_of(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<SweepPoint> expand(const ExperimentPlan& plan) {
  std::vector<SweepPoint> out;
  const int E = static_cast<int>(plan.elements_per_irs.size());
  for (int li = 0; li < static_cast<int>(plan.layouts.size()); ++li) {
    const LayoutVariant& lv = plan.layouts[static_cast<std::size_t>(li)];
    for (int ei = 0; ei < E; ++ei) {
      ScenarioConfig cfg = plan.base;
      cfg.num_irs = lv.num_irs;
      cfg.users_per_irs = lv.users_per_irs;
      if (lv.irs_positions.empty()) {
        RowLayout row = plan.row;
        row.num_irs = lv.num_irs;
        apply_row_layout(cfg, row);
      } else {
        cfg.irs_positions = lv.irs_positions;
        cfg.user_areas = lv.user_areas;
      }
      const int m = plan.elements_per_irs[static_cast<std::size_t>(ei)];
      if (m > 0) {
        cfg.elements_per_irs.assign(static_cast<std::size_t>(lv.num_irs), m);
      } else if (plan.base.elements_per_irs.size() != static_cast<std::size_t>(lv.num_irs)) {
        const auto& b = plan.base.elements_per_irs;
        if (std::adjacent_find(b.begin(), b.end(), std::not_equal_to<>()) != b.end())
          throw std::invalid_argument("elements_per_irs of the scenario cannot be spread over a layout with " +
                                      std::to_string(lv.num_irs) + " IRSs");
        cfg.elements_per_irs.assign(static_cast<std::size_t>(lv.num_irs), b.front());
      }
      for (double p : plan.tx_power_dbm) {
        for (SecondaryMode mode : plan.modes) {
          SweepPoint pt;
          pt.index = static_cast<int>(out.size());
          pt.geometry = li * E + ei;
          pt.layout = li;
          pt.elements = ei;
          pt.tx_power_dbm = p;
          pt.mode = mode;
          pt.scenario = cfg;
          pt.scenario.tx_power_dbm = p;
          pt.solver = plan.solver;
          if (mode == SecondaryMode::off) pt.scenario.secondary_reflections = false;
          if (mode == SecondaryMode::unmanaged) pt.solver.secondary = false;
          pt.scenario.validate();

          YAML::Emitter e;
          begin(e);
          e << YAML::BeginMap;
          emit_scenario(e, pt.scenario, plan.row);
          emit_solver(e, pt.solver);
          e << YAML::Key << "mode" << YAML::Value << std::string(to_string(mode));
          e << YAML::EndMap;
          pt.fingerprint = fingerprint_of(e.c_str());
          out.push_back(std::move(pt));
        }
      }
    }
  }
  return out;
}

}  // namespace mirs
