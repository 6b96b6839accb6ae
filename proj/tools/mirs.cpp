// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------
//
// Command-line front end: run / sweep-power / validate / trace.
// Exit codes: 0 ok, 2 configuration error, 3 solver failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mirs/bench.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kSolverFailure = 3;

struct Common {
  std::string config;
  std::string out;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool timing = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Experiment plan (YAML)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "CSV output path (default: plan's output, else stdout)");
  cmd->add_option("--trials", c.trials, "Trials per sweep point")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Base seed");
  cmd->add_option("--threads", c.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--timing", c.timing, "Fill the wall_ms column (breaks byte-identical reruns)");
  cmd->add_flag("-q,--quiet", c.quiet, "No progress on stderr");
}

mirs::ExperimentPlan load(const Common& c) {
  mirs::ExperimentPlan plan = mirs::load_config(c.config);
  if (c.trials) plan.trials = *c.trials;
  if (c.seed) plan.base.rng_seed = *c.seed;
  if (c.threads) plan.threads = *c.threads;
  if (c.timing) plan.record_wall_time = true;
  if (!c.out.empty()) plan.output = c.out;
  plan.validate();
  return plan;
}

int execute(const mirs::ExperimentPlan& plan, bool quiet) {
  mirs::ProgressFn progress;
  if (!quiet) {
    progress = [](int done, int total) {
      std::cerr << "\r" << done << "/" << total << " trials" << (done == total ? "\n" : "") << std::flush;
    };
  }
  const mirs::ExperimentResult result = mirs::run_experiment(plan, plan.threads, progress);

  if (plan.output.empty() || plan.output == "-") {
    mirs::emit_csv(result.records, std::cout);
  } else {
    mirs::write_csv(result.records, plan.output);
    std::ofstream points(plan.output + ".points.csv", std::ios::binary);
    mirs::emit_points(mirs::expand(plan), points);
  }
  for (const auto& f : result.failures)
    std::cerr << "trial failed: point " << f.point << " trial " << f.trial << " seed " << f.seed << ": " << f.what
              << "\n";
  return result.failures.empty() ? 0 : kSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-min rate design for uplink multi-IRS MIMO cells"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "Run every sweep point of a plan");
  add_common(run, run_opts);

  Common sweep_opts;
  double from = 0.0, to = 0.0, step = 5.0;
  auto* sweep = app.add_subcommand("sweep-power", "Run the plan over a transmit power range");
  add_common(sweep, sweep_opts);
  sweep->add_option("--from", from, "First power (dBm)")->required();
  sweep->add_option("--to", to, "Last power (dBm)")->required();
  sweep->add_option("--step", step, "Power step (dBm)")->check(CLI::PositiveNumber);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a plan and print its canonical form");
  validate->add_option("--config", validate_path, "Experiment plan (YAML)")->required();

  Common trace_opts;
  int trace_point = 0, trace_trial = 0;
  auto* trace = app.add_subcommand("trace", "Per-iteration trace of one instance");
  trace->add_option("--config", trace_opts.config, "Experiment plan (YAML)")->required()->check(CLI::ExistingFile);
  trace->add_option("--out", trace_opts.out, "CSV output path (default: stdout)");
  trace->add_option("--seed", trace_opts.seed, "Base seed");
  trace->add_option("--point", trace_point, "Sweep point index")->check(CLI::NonNegativeNumber);
  trace->add_option("--trial", trace_trial, "Trial index")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*validate) {
      const mirs::ExperimentPlan plan = mirs::load_config(validate_path);
      std::cout << mirs::emit_config(plan);
      std::cerr << mirs::expand(plan).size() << " sweep points x " << plan.trials << " trials\n";
      return 0;
    }
    if (*run) return execute(load(run_opts), run_opts.quiet);
    if (*sweep) {
      if (to < from) throw mirs::ConfigError("--to", 0, "must not be below --from");
      mirs::ExperimentPlan plan = load(sweep_opts);
      plan.tx_power_dbm.clear();
      const int n = static_cast<int>(std::floor((to - from) / step + 1e-9));
      for (int i = 0; i <= n; ++i) plan.tx_power_dbm.push_back(from + step * i);
      return execute(plan, sweep_opts.quiet);
    }
    if (*trace) {
      mirs::ExperimentPlan plan = load(trace_opts);
      const auto points = mirs::expand(plan);
      if (trace_point >= static_cast<int>(points.size()))
        throw mirs::ConfigError("--point", 0, "out of range (plan has " + std::to_string(points.size()) + ")");
      try {
        const mirs::TrialRun tr =
            mirs::run_trial(points[static_cast<std::size_t>(trace_point)], trace_trial, plan.base.rng_seed);
        if (trace_opts.out.empty() || trace_opts.out == "-") {
          mirs::emit_trace(tr.state.trace, std::cout);
        } else {
          std::ofstream out(trace_opts.out, std::ios::binary);
          if (!out) throw std::runtime_error("cannot open '" + trace_opts.out + "'");
          mirs::emit_trace(tr.state.trace, out);
        }
      } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kSolverFailure;
      }
      return 0;
    }
  } catch (const mirs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  }
  return 0;
}
