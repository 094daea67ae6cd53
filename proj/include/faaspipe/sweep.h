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


#ifndef FAASPIPE_SWEEP_H_
#define FAASPIPE_SWEEP_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "faaspipe/analytic.h"
#include "faaspipe/scenario.h"

namespace faaspipe {

// One sweep grid point, for one seed.
struct SweepRow {
  std::size_t index = 0;  // grid position
  double value = 0.0;     // axis value
  std::uint64_t seed = 0;
  std::string digest;     // of the point's derived config
  int function_id = 0;    // function tracked by the latency columns
  int replicas = 0;       // slot-1 replicas of the tracked function
  double lambda = 0.0;    // slot-1 arrival rate of the tracked function
  Metric analytic_total;  // T_m, slot 1
  Metric analytic_wf;
  double analytic_utilization = 0.0;  // mean server utilization, slot 1
  double analytic_cold_power = 0.0;   // Pc_total summed over slots, servers
  double analytic_power = 0.0;        // P_s mean per slot, summed over servers
  double analytic_energy = 0.0;
  bool simulated = false;
  double sim_total = 0.0;  // mean T_m of completed events
  double sim_energy = 0.0;
  std::uint64_t sim_cold_starts = 0;
  std::string error;  // set when the point failed
};

struct TrendCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // ordered by (index, seed position)
  std::vector<TrendCheck> checks;

  bool passed() const;
};

// Applies one axis value to a copy of the scenario. The lambda axis scales
// every function so that the slot-1 aggregate rate equals `value`.
ScenarioConfig apply_sweep_point(const ScenarioConfig& cfg, SweepAxis axis,
                                 double value);

// Whether points on this axis are simulated or only evaluated in closed
// form.
bool axis_simulates(SweepAxis axis);

// Evaluates every grid point on up to `workers` threads (0: all cores).
SweepResult run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec,
                      unsigned workers = 0);

}  // namespace faaspipe

#endif  // FAASPIPE_SWEEP_H_
