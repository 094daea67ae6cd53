// Copyright 2026 The faaspipe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line front end: analytic, simulate, compare and sweep runs over a
// scenario file, writing report.csv, trace.csv, replicas.csv and
// summary.txt.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "faaspipe/analytic.h"
#include "faaspipe/compare.h"
#include "faaspipe/errors.h"
#include "faaspipe/output.h"
#include "faaspipe/scenario.h"
#include "faaspipe/simulation.h"
#include "faaspipe/sweep.h"

namespace fs = std::filesystem;
using namespace faaspipe;

namespace {

constexpr int kPass = 0;
constexpr int kToleranceFailure = 1;
constexpr int kConfigError = 2;
constexpr int kInternalError = 3;

constexpr const char* kOutputEnv = "FAASPIPE_OUTPUT_DIR";

// --out, then the environment, then the scenario, then the working
// directory.
fs::path output_dir(const std::string& flag, const ScenarioConfig& cfg) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  return fs::current_path();
}

void write_file(const fs::path& dir, const std::string& name,
                const std::string& text) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  out << text;
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
}

struct Common {
  std::string config;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config, "Scenario file")->required();
  cmd->add_option("--out", c.out,
                  "Output directory (overrides " + std::string(kOutputEnv) +
                      " and the scenario's output.dir)");
}

int run_analytic_cmd(const Common& c) {
  const ScenarioConfig cfg = parse_scenario(c.config);
  const AnalyticReport report = run_analytic(cfg);
  const fs::path dir = output_dir(c.out, cfg);
  write_file(dir, "report.csv", analytic_report_csv(cfg, report));
  write_file(dir, "trace.csv", analytic_trace_csv(cfg, report));
  const std::string summary = analytic_summary(cfg, report);
  write_file(dir, "summary.txt", summary);
  std::cout << summary;
  return kPass;
}

int run_simulate_cmd(const Common& c, std::optional<std::uint64_t> seed,
                     std::optional<double> horizon) {
  ScenarioConfig cfg = parse_scenario(c.config);
  if (seed) cfg.simulation.seeds = {*seed};
  if (horizon) {
    if (!(*horizon > 0.0)) {
      throw ConfigError({Violation{"--horizon", "must be positive"}});
    }
    set_horizon(cfg, *horizon);
  }
  std::vector<SimReport> runs;
  for (std::uint64_t s : cfg.simulation.seeds) {
    runs.push_back(run_simulation(cfg, s));
  }
  const fs::path dir = output_dir(c.out, cfg);
  write_file(dir, "report.csv", sim_report_csv(cfg, runs));
  write_file(dir, "trace.csv", sim_trace_csv(runs));
  write_file(dir, "replicas.csv", sim_replicas_csv(cfg, runs));
  const std::string summary = sim_summary(cfg, runs);
  write_file(dir, "summary.txt", summary);
  std::cout << summary;
  return kPass;
}

int run_compare_cmd(const Common& c, const Tolerances& tol) {
  const ScenarioConfig cfg = parse_scenario(c.config);
  const ComparisonReport report = run_compare(cfg, tol);
  const fs::path dir = output_dir(c.out, cfg);
  write_file(dir, "report.csv", compare_csv(report));
  const std::string summary = compare_summary(cfg, report);
  write_file(dir, "summary.txt", summary);
  std::cout << summary;
  return report.passed() ? kPass : kToleranceFailure;
}

struct SweepArgs {
  std::string axis;
  std::optional<double> from;
  std::optional<double> to;
  std::optional<double> step;
  unsigned workers = 0;
};

int run_sweep_cmd(const Common& c, const SweepArgs& a) {
  const ScenarioConfig cfg = parse_scenario(c.config);
  const auto axis = parse_sweep_axis(a.axis);
  if (!axis) {
    throw ConfigError({Violation{
        "--axis",
        "unknown axis \"" + a.axis +
            "\" (lambda, replicas, cold_delay, containers, utilization)"}});
  }
  SweepSpec spec;
  spec.axis = *axis;
  if (const SweepSpec* shipped = cfg.find_sweep(*axis)) spec = *shipped;
  if (a.from) spec.from = *a.from;
  if (a.to) spec.to = *a.to;
  if (a.step) spec.step = *a.step;
  std::vector<Violation> v;
  if (!(spec.step > 0.0)) v.push_back({"--step", "must be positive"});
  if (spec.to < spec.from) v.push_back({"--to", "must not be below --from"});
  if (!cfg.find_sweep(*axis) && (!a.from || !a.to)) {
    v.push_back({"--from/--to",
                 "required when the scenario defines no sweep on this axis"});
  }
  if (!v.empty()) throw ConfigError(std::move(v));

  const SweepResult result = run_sweep(cfg, spec, a.workers);
  const fs::path dir = output_dir(c.out, cfg);
  write_file(dir, "report.csv", sweep_csv(result));
  const std::string summary = sweep_summary(cfg, result);
  write_file(dir, "summary.txt", summary);
  std::cout << summary;
  return result.passed() ? kPass : kToleranceFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serverless pipeline latency and power: closed-form analysis "
               "and discrete-event simulation"};
  app.require_subcommand(1);

  Common analytic_args;
  auto* analytic = app.add_subcommand("analytic", "Closed-form report");
  add_common(analytic, analytic_args);

  Common sim_args;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  auto* simulate = app.add_subcommand("simulate", "Discrete-event simulation");
  add_common(simulate, sim_args);
  simulate->add_option("--seed", seed, "Seed (replaces the scenario's list)");
  simulate->add_option("--horizon", horizon,
                       "Horizon in seconds (resizes the slot count)");

  Common compare_args;
  Tolerances tol;
  auto* compare =
      app.add_subcommand("compare", "Simulation against closed form");
  add_common(compare, compare_args);
  compare->add_option("--tol-m1", tol.single_server,
                      "Relative tolerance for TS, Wg, Tg")
      ->capture_default_str();
  compare->add_option("--tol-mn", tol.pool,
                      "Relative tolerance for pool, utilization and power")
      ->capture_default_str();

  Common sweep_common;
  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep");
  add_common(sweep, sweep_common);
  sweep->add_option("--axis", sweep_args.axis,
                    "lambda, replicas, cold_delay, containers, utilization")
      ->required();
  sweep->add_option("--from", sweep_args.from);
  sweep->add_option("--to", sweep_args.to);
  sweep->add_option("--step", sweep_args.step);
  sweep->add_option("--workers", sweep_args.workers,
                    "Worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kConfigError;
  }

  try {
    if (*analytic) return run_analytic_cmd(analytic_args);
    if (*simulate) return run_simulate_cmd(sim_args, seed, horizon);
    if (*compare) return run_compare_cmd(compare_args, tol);
    if (*sweep) return run_sweep_cmd(sweep_common, sweep_args);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error:\n";
    for (const auto& v : e.violations()) {
      std::cerr << "  " << v.path << ": " << v.reason << '\n';
    }
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInternalError;
}
