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


#include "faaspipe/sweep.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "faaspipe/errors.h"
#include "faaspipe/simulation.h"
#include "faaspipe/toml_lite.h"

namespace faaspipe {

using toml_lite::format_double;

bool SweepResult::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const TrendCheck& c) { return c.pass; });
}

bool axis_simulates(SweepAxis axis) {
  return axis == SweepAxis::kLambda || axis == SweepAxis::kReplicas ||
         axis == SweepAxis::kColdDelay;
}

ScenarioConfig apply_sweep_point(const ScenarioConfig& cfg, SweepAxis axis,
                                 double value) {
  ScenarioConfig out = cfg;
  switch (axis) {
    case SweepAxis::kLambda: {
      double current = 0.0;
      for (const auto& fs : out.functions) {
        current += fs.workload.rate(out.grid, 1);
      }
      for (auto& fs : out.functions) {
        auto& rates = fs.workload.lambda_per_slot;
        if (current > 0.0) {
          for (double& r : rates) r *= value / current;
        } else {
          std::fill(rates.begin(), rates.end(),
                    value / static_cast<double>(out.functions.size()));
        }
      }
      break;
    }
    case SweepAxis::kReplicas: {
      const int n = static_cast<int>(std::lround(value));
      for (auto& fs : out.functions) {
        fs.initial_replicas = n;
        fs.n_max = std::max(fs.n_max, n);
      }
      std::vector<int> hosted(out.servers.size(), 0);
      for (std::size_t f = 0; f < out.functions.size(); ++f) {
        hosted[out.host_server(f)] += n;
      }
      for (std::size_t s = 0; s < out.servers.size(); ++s) {
        out.servers[s].max_containers =
            std::max(out.servers[s].max_containers, hosted[s]);
      }
      break;
    }
    case SweepAxis::kColdDelay:
      for (auto& s : out.servers) s.cold_start_delay = value;
      break;
    case SweepAxis::kContainers: {
      const int k = static_cast<int>(std::lround(value));
      for (auto& s : out.servers) s.max_containers = std::max(s.max_containers, k);
      break;
    }
    case SweepAxis::kUtilization:
      break;
  }
  return out;
}

namespace {

// Power-only evaluation for the containers and utilization axes: every
// server at utilization `u` with the first `cold` containers cold-starting.
void evaluate_power(const ScenarioConfig& cfg, double u, int cold,
                    SweepRow& row) {
  for (const auto& params : cfg.servers) {
    std::vector<bool> flags(static_cast<std::size_t>(params.max_containers),
                            false);
    for (int i = 0; i < cold; ++i) flags[static_cast<std::size_t>(i)] = true;
    const auto bd = total_server_power(u, flags, params, cfg.grid.slot_length);
    row.analytic_cold_power += bd.cold_power;
    row.analytic_power += bd.total_power;
    row.analytic_energy += bd.energy;
  }
  row.analytic_utilization = u;
}

void evaluate_point(const ScenarioConfig& base, const SweepSpec& spec,
                    double value, std::uint64_t seed, SweepRow& row) {
  const ScenarioConfig cfg = apply_sweep_point(base, spec.axis, value);
  row.digest = config_digest(cfg);
  std::size_t tracked = 0;
  if (spec.function_id) {
    for (std::size_t f = 0; f < cfg.functions.size(); ++f) {
      if (cfg.functions[f].workload.id == *spec.function_id) tracked = f;
    }
  }
  row.function_id = cfg.functions[tracked].workload.id;

  const AnalyticReport analytic = run_analytic(cfg);
  const AnalyticSlot& first = analytic.slots.front();
  row.replicas = first.functions[tracked].replicas;
  row.lambda = first.functions[tracked].lambda;
  row.analytic_total = first.functions[tracked].total;
  row.analytic_wf = first.functions[tracked].wf;

  double u_mean = 0.0;
  for (const auto& bd : first.power) u_mean += bd.utilization;
  u_mean /= static_cast<double>(first.power.size());

  if (spec.axis == SweepAxis::kContainers) {
    evaluate_power(cfg, spec.utilization.value_or(u_mean),
                   static_cast<int>(std::lround(value)), row);
    return;
  }
  if (spec.axis == SweepAxis::kUtilization) {
    evaluate_power(cfg, std::clamp(value, 0.0, 1.0), 0, row);
    return;
  }

  row.analytic_utilization = u_mean;
  for (const auto& slot : analytic.slots) {
    for (const auto& bd : slot.power) {
      row.analytic_cold_power += bd.cold_power;
      row.analytic_power += bd.total_power;
    }
  }
  row.analytic_power /= static_cast<double>(analytic.slots.size());
  row.analytic_energy = analytic.total_energy;

  const SimReport sim = run_simulation(cfg, seed);
  row.simulated = true;
  row.sim_total = sim.functions[tracked].mean_total;
  row.sim_energy = sim.total_energy;
  for (const auto& slot : sim.slots) {
    for (int c : slot.cold_starts) {
      row.sim_cold_starts += static_cast<std::uint64_t>(c);
    }
  }
}

std::string describe(const SweepRow& row) {
  return "point " + std::to_string(row.index) + " (" +
         format_double(row.value) + ")";
}

// Checks a per-point series; `cmp(prev, next)` must hold between
// consecutive points.
template <typename Get, typename Cmp>
TrendCheck series_check(std::string name, const std::vector<SweepRow>& rows,
                        std::uint64_t seed, Get get, Cmp cmp) {
  TrendCheck check{std::move(name), true, "ok"};
  const SweepRow* prev = nullptr;
  double prev_value = 0.0;
  for (const auto& row : rows) {
    if (row.seed != seed) continue;
    if (!row.error.empty()) {
      check.pass = false;
      check.detail = describe(row) + " failed: " + row.error;
      return check;
    }
    const std::optional<double> v = get(row);
    if (!v) {
      check.pass = false;
      check.detail = describe(row) + " has no value";
      return check;
    }
    if (prev && !cmp(prev_value, *v)) {
      check.pass = false;
      check.detail = describe(*prev) + " = " + format_double(prev_value) +
                     ", " + describe(row) + " = " + format_double(*v);
      return check;
    }
    prev = &row;
    prev_value = *v;
  }
  return check;
}

std::optional<double> metric_value(const Metric& m) {
  if (!m.ok()) return std::nullopt;
  return m.value;
}

std::vector<TrendCheck> trend_checks(const SweepSpec& spec,
                                     const std::vector<SweepRow>& rows,
                                     const std::vector<std::uint64_t>& seeds) {
  std::vector<TrendCheck> checks;
  const std::uint64_t first = rows.empty() ? 0 : rows.front().seed;
  auto increasing = [](double a, double b) { return b > a; };
  auto decreasing = [](double a, double b) { return b < a; };
  auto non_decreasing = [](double a, double b) { return b >= a; };
  switch (spec.axis) {
    case SweepAxis::kLambda:
      checks.push_back(series_check(
          "analytic T strictly increasing in lambda", rows, first,
          [](const SweepRow& r) { return metric_value(r.analytic_total); },
          increasing));
      break;
    case SweepAxis::kReplicas:
      checks.push_back(series_check(
          "analytic T strictly decreasing in replicas", rows, first,
          [](const SweepRow& r) { return metric_value(r.analytic_total); },
          decreasing));
      break;
    case SweepAxis::kColdDelay:
      checks.push_back(series_check(
          "analytic energy non-decreasing in cold start delay", rows, first,
          [](const SweepRow& r) {
            return std::optional<double>(r.analytic_energy);
          },
          non_decreasing));
      for (std::uint64_t seed : seeds) {
        checks.push_back(series_check(
            "simulated energy non-decreasing in cold start delay (seed " +
                std::to_string(seed) + ")",
            rows, seed,
            [](const SweepRow& r) {
              return std::optional<double>(r.sim_energy);
            },
            non_decreasing));
      }
      break;
    case SweepAxis::kContainers: {
      checks.push_back(series_check(
          "total power non-decreasing in cold containers", rows, first,
          [](const SweepRow& r) {
            return std::optional<double>(r.analytic_power);
          },
          non_decreasing));
      TrendCheck linear{"cold power linear in cold containers", true, "ok"};
      for (std::size_t i = 2; i < rows.size(); ++i) {
        const double d1 = rows[i - 1].analytic_cold_power -
                          rows[i - 2].analytic_cold_power;
        const double d2 =
            rows[i].analytic_cold_power - rows[i - 1].analytic_cold_power;
        const double dx1 = rows[i - 1].value - rows[i - 2].value;
        const double dx2 = rows[i].value - rows[i - 1].value;
        const double s1 = d1 / dx1;
        const double s2 = d2 / dx2;
        if (std::fabs(s2 - s1) > 1e-9 * std::max(std::fabs(s1), 1.0)) {
          linear.pass = false;
          linear.detail = describe(rows[i]) + " slope " + format_double(s2) +
                          " differs from " + format_double(s1);
          break;
        }
      }
      checks.push_back(linear);
      break;
    }
    case SweepAxis::kUtilization:
      checks.push_back(series_check(
          "total power strictly increasing in utilization", rows, first,
          [](const SweepRow& r) {
            return std::optional<double>(r.analytic_power);
          },
          increasing));
      break;
  }
  return checks;
}

}  // namespace

SweepResult run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec,
                      unsigned workers) {
  if (auto violations = validate(cfg); !violations.empty()) {
    throw ConfigError(std::move(violations));
  }
  SweepResult result;
  result.spec = spec;
  const std::vector<double> points = spec.points();
  if (points.empty()) {
    throw ConfigError(std::vector<Violation>{{"sweep", "the range holds no points"}});
  }
  std::vector<std::uint64_t> seeds = cfg.simulation.seeds;
  if (!axis_simulates(spec.axis)) seeds.resize(1);

  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::uint64_t seed : seeds) {
      SweepRow row;
      row.index = i;
      row.value = points[i];
      row.seed = seed;
      result.rows.push_back(row);
    }
  }

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers,
                               static_cast<unsigned>(result.rows.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < result.rows.size(); i = next++) {
      SweepRow& row = result.rows[i];
      try {
        evaluate_point(cfg, spec, row.value, row.seed, row);
      } catch (const ConfigError& e) {
        row.error = e.violations().empty()
                        ? std::string(e.what())
                        : e.violations().front().path + ": " +
                              e.violations().front().reason;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  result.checks = trend_checks(spec, result.rows, seeds);
  return result;
}

}  // namespace faaspipe
