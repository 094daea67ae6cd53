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

#ifndef FAASPIPE_SCENARIO_H_
#define FAASPIPE_SCENARIO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faaspipe/autoscaler.h"
#include "faaspipe/errors.h"
#include "faaspipe/power.h"
#include "faaspipe/queueing.h"
#include "faaspipe/workload.h"

namespace faaspipe {

enum class PlacementPolicy { kSingle, kRoundRobin };

const char* to_string(PlacementPolicy p);

// Stages an event passes through. A disabled stage forwards instantly.
struct PipelineStages {
  bool controller = true;
  bool gateway = true;
  bool functions = true;

  bool operator==(const PipelineStages&) const = default;
};

struct FunctionSpec {
  FunctionClass workload;
  int initial_replicas = 1;  // warm at t = 0
  int n_max = 10;

  bool operator==(const FunctionSpec&) const = default;
};

enum class SweepAxis { kLambda, kReplicas, kColdDelay, kContainers,
                       kUtilization };

const char* to_string(SweepAxis axis);
std::optional<SweepAxis> parse_sweep_axis(std::string_view name);

struct SweepSpec {
  SweepAxis axis = SweepAxis::kLambda;
  double from = 0.0;
  double to = 0.0;
  double step = 1.0;
  // Function whose T_m fills the latency columns. Unset: the first one.
  std::optional<int> function_id;
  // Fixed utilization for the containers axis. Unset: analytic U of slot 1.
  std::optional<double> utilization;

  // from, from + step, ... up to `to` (inclusive, with a 1e-9 step slack).
  std::vector<double> points() const;

  bool operator==(const SweepSpec&) const = default;
};

struct SimulationSettings {
  std::vector<std::uint64_t> seeds{1};
  // A queue longer than this marks the run as growing without bound.
  std::uint64_t backlog_cap = 1000000;
  double warmup_fraction = 0.1;
  int batches = 20;

  bool operator==(const SimulationSettings&) const = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  WaitFormula wait_formula = WaitFormula::kGeneral;
  TimeSlotGrid grid;
  ChannelParams channel;
  PipelineStages stages;
  ServiceDistribution gateway_service =
      ServiceDistribution::deterministic(1e-6);
  std::vector<FunctionSpec> functions;
  std::vector<ServerPowerParams> servers;
  PlacementPolicy placement = PlacementPolicy::kSingle;
  AutoscalerPolicy autoscaler;
  SimulationSettings simulation;
  std::string output_dir;
  std::vector<SweepSpec> sweeps;

  bool operator==(const ScenarioConfig&) const = default;

  // Index into `servers` hosting function index `f`.
  std::size_t host_server(std::size_t f) const;

  // Lowest-index function subscribed to `topic`.
  std::optional<std::size_t> route(std::string_view topic) const;

  // Arrival rate reaching each pool in a slot, after topic routing.
  std::vector<double> pool_rates(int slot) const;

  // Whether any function overrides the channel packet size with a
  // different value.
  bool packet_size_varies() const;

  const SweepSpec* find_sweep(SweepAxis axis) const;
};

// Every violated constraint, each with its field path.
std::vector<Violation> validate(const ScenarioConfig& cfg);

// Throws ConfigError with every violation (syntax or schema), or with a
// single violation naming the path when the file cannot be read.
ScenarioConfig parse_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario_text(std::string_view text);

// Canonical text form; parse_scenario_text(serialize_scenario(c)) == c.
std::string serialize_scenario(const ScenarioConfig& cfg);

// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_digest(const ScenarioConfig& cfg);

// Sets the horizon to ceil(horizon / slot_length) slots, repeating each
// function's last slot rate when the grid grows.
void set_horizon(ScenarioConfig& cfg, double horizon);

}  // namespace faaspipe

#endif  // FAASPIPE_SCENARIO_H_
