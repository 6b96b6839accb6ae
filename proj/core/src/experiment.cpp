// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "mirs/bench.hpp"

namespace mirs {

namespace {

constexpr const char* kHeader = "fingerprint,seed,ptx_dbm,min_rate,avg_rate,iters,gap,wall_ms";
constexpr std::uint64_t kSolverStream = 0x616f;  // separates optimizer draws from channel draws

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string joined(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

struct Fnv {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void add(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  }
  void add(const CMat& m) {
    const Eigen::Index dims[2] = {m.rows(), m.cols()};
    add(dims, sizeof dims);
    add(m.data(), sizeof(cplx) * static_cast<std::size_t>(m.size()));
  }
};

}  // namespace

bool ExperimentRecord::same_fields(const ExperimentRecord& o) const {
  return fingerprint == o.fingerprint && seed == o.seed && ptx_dbm == o.ptx_dbm && min_rate == o.min_rate &&
         avg_rate == o.avg_rate && iters == o.iters && gap == o.gap && wall_ms == o.wall_ms;
}

std::uint64_t trial_seed(std::uint64_t base, int geometry, int trial) {
  return derive_seed(base, {static_cast<std::uint64_t>(geometry), static_cast<std::uint64_t>(trial)});
}

std::string channel_fingerprint(const RawChannels& raw) {
  Fnv f;
  for (const auto& a : raw.u)
    for (const auto& b : a)
      for (const auto& v : b) f.add(v);
  for (const auto& row : raw.d)
    for (const auto& m : row) f.add(m);
  for (const auto& m : raw.g) f.add(m);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(f.h));
  return buf;
}

TrialRun run_trial(const SweepPoint& point, int trial, std::uint64_t base_seed, bool record_wall_time) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t seed = trial_seed(base_seed, point.geometry, trial);

  ScenarioConfig cfg = point.scenario;
  cfg.rng_seed = seed;
  Rng rng(seed);
  const Scene scene = sample_scene(cfg, rng);
  const RawChannels raw = synth_channels(scene, cfg, rng);
  const Uplink world = make_uplink(cfg, scene, raw);

  AoParams params = point.solver;
  params.seed = derive_seed(seed, {kSolverStream});

  TrialRun out;
  out.channel_digest = channel_fingerprint(raw);
  out.state = run(world, params);

  // Score on the world channel; differs from the optimizer's view only when
  // double bounces are unmanaged.
  const CMat H = effective_channel_matrix(world.channels, out.state.phases);
  out.world_sinr = per_user_sinr(out.state.beamformers.w, H, world.powers, world.noise_watts);

  ExperimentRecord& r = out.record;
  r.fingerprint = point.fingerprint;
  r.seed = seed;
  r.ptx_dbm = point.tx_power_dbm;
  double sum = 0.0;
  r.min_rate = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < out.world_sinr.size(); ++i) {
    const double rate = rate_of(out.world_sinr(i));
    sum += rate;
    r.min_rate = std::min(r.min_rate, rate);
  }
  r.avg_rate = sum / static_cast<double>(out.world_sinr.size());
  r.min_rate = std::min(r.min_rate, r.avg_rate);  // exact ordering despite rounding in the mean
  r.iters = out.state.iteration;
  r.gap = out.state.stats.mean_gap();
  r.point = point.index;
  r.trial = trial;
  if (record_wall_time)
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

ExperimentResult run_experiment(const ExperimentPlan& plan, int threads, const ProgressFn& progress) {
  plan.validate();
  const std::vector<SweepPoint> points = expand(plan);
  const int total = static_cast<int>(points.size()) * plan.trials;

  std::vector<ExperimentRecord> slots(static_cast<std::size_t>(total));
  std::vector<std::string> errors(static_cast<std::size_t>(total));
  std::vector<char> ok(static_cast<std::size_t>(total), 0);
  std::atomic<int> next{0};
  std::mutex progress_mutex;
  int done = 0;

  auto worker = [&] {
    for (int task = next++; task < total; task = next++) {
      const auto& pt = points[static_cast<std::size_t>(task / plan.trials)];
      const int trial = task % plan.trials;
      const auto at = static_cast<std::size_t>(task);
      try {
        slots[at] = run_trial(pt, trial, plan.base.rng_seed, plan.record_wall_time).record;
        ok[at] = 1;
      } catch (const std::exception& e) {
        errors[at] = e.what();
      }
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(++done, total);
      }
    }
  };

  int n = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n = std::min(n, std::max(total, 1));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Task order already is (point, trial) order.
  ExperimentResult result;
  for (int task = 0; task < total; ++task) {
    const auto at = static_cast<std::size_t>(task);
    if (ok[at]) {
      result.records.push_back(std::move(slots[at]));
    } else {
      const auto& pt = points[static_cast<std::size_t>(task / plan.trials)];
      const int trial = task % plan.trials;
      result.failures.push_back({pt.index, trial, trial_seed(plan.base.rng_seed, pt.geometry, trial), errors[at]});
    }
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentPlan& plan) { return run_experiment(plan, plan.threads); }

void emit_csv(const std::vector<ExperimentRecord>& records, std::ostream& out) {
  out << kHeader << '\n';
  for (const auto& r : records) {
    out << r.fingerprint << ',' << r.seed << ',' << num(r.ptx_dbm) << ',' << num(r.min_rate) << ','
        << num(r.avg_rate) << ',' << r.iters << ',' << num(r.gap) << ',' << num(r.wall_ms) << '\n';
  }
}

void write_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit_csv(records, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<ExperimentRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::runtime_error("CSV header does not match");
  std::vector<ExperimentRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected 8 fields");
    auto real = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0')
        throw std::runtime_error("CSV line " + std::to_string(lineno) + ": bad number '" + s + "'");
      return v;
    };
    ExperimentRecord r;
    r.fingerprint = f[0];
    r.seed = std::strtoull(f[1].c_str(), nullptr, 10);
    r.ptx_dbm = real(f[2]);
    r.min_rate = real(f[3]);
    r.avg_rate = real(f[4]);
    r.iters = static_cast<int>(real(f[5]));
    r.gap = real(f[6]);
    r.wall_ms = real(f[7]);
    out.push_back(std::move(r));
  }
  return out;
}

void emit_points(const std::vector<SweepPoint>& points, std::ostream& out) {
  out << "fingerprint,point,layout,num_irs,users_per_irs,elements_per_irs,ptx_dbm,mode\n";
  for (const auto& p : points) {
    out << p.fingerprint << ',' << p.index << ',' << p.layout << ',' << p.scenario.num_irs << ','
        << joined(p.scenario.users_per_irs) << ',' << joined(p.scenario.elements_per_irs) << ','
        << num(p.tx_power_dbm) << ',' << to_string(p.mode) << '\n';
  }
}

void emit_trace(const std::vector<TraceRecord>& trace, std::ostream& out) {
  out << "iteration,gamma_min,rate\n";
  for (const auto& t : trace) out << t.iteration << ',' << num(t.gamma_min) << ',' << num(t.rate) << '\n';
}

}  // namespace mirs
