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


#include "faaspipe/analytic.h"

#include <algorithm>
#include <cmath>

#include "faaspipe/errors.h"
#include "faaspipe/queueing.h"

namespace faaspipe {

const char* to_string(MetricStatus status) {
  switch (status) {
    case MetricStatus::kOk:
      return "ok";
    case MetricStatus::kUnstable:
      return "unstable";
    case MetricStatus::kNoReplica:
      return "no_replica";
  }
  return "ok";
}

Metric operator+(const Metric& a, const Metric& b) {
  if (!a.ok()) return a;
  if (!b.ok()) return b;
  return Metric::Of(a.value + b.value);
}

namespace {

template <typename F>
Metric guarded(F&& f) {
  try {
    return Metric::Of(f());
  } catch (const NoReplicaError&) {
    return Metric::NoReplica();
  } catch (const UnstableError&) {
    return Metric::Unstable();
  }
}

}  // namespace

std::vector<int> analytic_replicas(const ScenarioConfig& cfg, std::size_t f) {
  const auto& fs = cfg.functions[f];
  std::vector<int> out;
  int n = fs.initial_replicas;
  for (int slot = 1; slot <= cfg.grid.slot_count; ++slot) {
    if (cfg.autoscaler.enabled) {
      const double lambda = cfg.pool_rates(slot)[f];
      int wanted = fs.n_max;
      try {
        wanted = min_replicas_for_threshold(lambda, fs.workload.service,
                                            cfg.autoscaler.threshold,
                                            fs.n_max, cfg.wait_formula);
      } catch (const InfeasibleError&) {
      }
      if (n == 0 && lambda > 0.0 && cfg.autoscaler.on_demand_launch) {
        wanted = std::max(wanted, 1);
      }
      n = std::max(n, std::min(wanted, fs.n_max));
    }
    out.push_back(n);
  }
  return out;
}

AnalyticReport run_analytic(const ScenarioConfig& cfg) {
  if (auto violations = validate(cfg); !violations.empty()) {
    throw ConfigError(std::move(violations));
  }
  AnalyticReport report;
  report.digest = config_digest(cfg);
  report.wait_formula = cfg.wait_formula;
  report.packet_size_varies = cfg.packet_size_varies();

  const std::size_t nf = cfg.functions.size();
  const std::size_t ns = cfg.servers.size();
  std::vector<std::vector<int>> trajectories;
  for (std::size_t f = 0; f < nf; ++f) {
    trajectories.push_back(analytic_replicas(cfg, f));
  }

  // Containers in use per server; new replicas take the next free index.
  std::vector<int> used(ns, 0);
  std::vector<int> placed(nf, 0);
  for (std::size_t f = 0; f < nf; ++f) {
    placed[f] = cfg.functions[f].initial_replicas;
    used[cfg.host_server(f)] += placed[f];
  }

  double mu_ctrl = 0.0;
  if (cfg.stages.controller) {
    const double rate = wireless_rate(cfg.channel);
    mu_ctrl = rate / cfg.channel.packet_size;
  }

  for (int slot = 1; slot <= cfg.grid.slot_count; ++slot) {
    AnalyticSlot out;
    out.slot = slot;
    for (const auto& fs : cfg.functions) {
      out.lambda_total += fs.workload.rate(cfg.grid, slot);
    }
    const double lambda = out.lambda_total;

    if (!cfg.stages.controller) {
      out.ts = Metric::Of(0.0);
    } else if (mu_ctrl <= 0.0) {
      out.ts = lambda > 0.0 ? Metric::Unstable() : Metric::Of(0.0);
    } else {
      out.ts = guarded([&] { return controller_latency(lambda, mu_ctrl).total; });
    }
    if (cfg.stages.gateway) {
      out.wg = guarded([&] { return mg1_wait(lambda, cfg.gateway_service); });
      out.tg = guarded(
          [&] { return gateway_response(lambda, cfg.gateway_service); });
    } else {
      out.wg = out.tg = Metric::Of(0.0);
    }
    out.tp = out.ts + out.tg;

    const auto rates = cfg.pool_rates(slot);
    std::vector<int> cold(nf, 0);
    for (std::size_t f = 0; f < nf; ++f) {
      const auto& fs = cfg.functions[f];
      const auto& sd = fs.workload.service;
      FunctionSlotResult r;
      r.function_id = fs.workload.id;
      r.lambda = rates[f];
      const std::size_t s = cfg.host_server(f);
      int want = trajectories[f][static_cast<std::size_t>(slot - 1)];
      const int room = cfg.servers[s].max_containers - used[s];
      const int grow = std::clamp(want - placed[f], 0, std::max(room, 0));
      if (want - placed[f] > grow) r.saturated = true;
      cold[f] = grow;
      placed[f] += grow;
      used[s] += grow;
      r.replicas = placed[f];
      if (cfg.autoscaler.enabled && r.replicas >= fs.n_max &&
          r.lambda > 0.0) {
        const Metric w = guarded([&] {
          return mgn_wait(r.lambda, sd, r.replicas, cfg.wait_formula);
        });
        if (!w.ok() || w.value >= cfg.autoscaler.threshold) r.saturated = true;
      }

      if (!cfg.stages.functions) {
        r.wf = r.tf = Metric::Of(0.0);
        r.utilization = Metric::Of(0.0);
      } else {
        r.wf = guarded(
            [&] { return mgn_wait(r.lambda, sd, r.replicas, cfg.wait_formula); });
        r.tf = guarded([&] {
          return function_response(r.lambda, sd, r.replicas, cfg.wait_formula);
        });
        r.utilization = guarded([&] {
          return function_utilization(r.lambda, sd.rate(), r.replicas);
        });
      }
      r.total = out.ts + out.tg + r.tf;
      if (!r.total.ok()) report.any_unstable = true;
      out.functions.push_back(r);
    }
    if (!out.tp.ok()) report.any_unstable = true;

    // Expected busy replicas per server; a saturated pool keeps all busy.
    std::vector<double> busy(ns, 0.0);
    std::vector<std::vector<bool>> flags(ns);
    for (std::size_t s = 0; s < ns; ++s) {
      flags[s].assign(static_cast<std::size_t>(cfg.servers[s].max_containers),
                      false);
    }
    for (std::size_t f = 0; f < nf; ++f) {
      const std::size_t s = cfg.host_server(f);
      if (cfg.stages.functions) {
        const double load = rates[f] * cfg.functions[f].workload.service.mean();
        busy[s] += std::min(load, static_cast<double>(placed[f]));
      }
    }
    // Containers newly started this slot occupy the indices after those
    // already running at the slot start.
    std::vector<int> running_before(ns, 0);
    for (std::size_t f = 0; f < nf; ++f) {
      running_before[cfg.host_server(f)] += placed[f] - cold[f];
    }
    std::vector<int> cursor = running_before;
    for (std::size_t f = 0; f < nf; ++f) {
      const std::size_t s = cfg.host_server(f);
      for (int i = 0; i < cold[f]; ++i) {
        flags[s][static_cast<std::size_t>(cursor[s]++)] = true;
      }
    }
    for (std::size_t s = 0; s < ns; ++s) {
      const auto& params = cfg.servers[s];
      const double u = std::clamp(busy[s] / params.core_count, 0.0, 1.0);
      out.power.push_back(total_server_power(u, flags[s], params,
                                             cfg.grid.slot_length, slot));
      report.total_energy += out.power.back().energy;
    }
    report.slots.push_back(std::move(out));
  }
  return report;
}

}  // namespace faaspipe
