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

#ifndef FAASPIPE_POWER_H_
#define FAASPIPE_POWER_H_

#include <vector>

namespace faaspipe {

// Default power coefficient. An implementation default in the usual
// effective-capacitance range, not a measured value.
inline constexpr double kDefaultEta = 1e-26;

struct ServerPowerParams {
  int id = 1;
  double idle_power = 100.0;        // W
  double gamma1 = 50.0;             // W per unit utilization
  double gamma2 = 120.0;            // W per unit utilization^2
  double eta = kDefaultEta;         // W s^3 / cycle^3
  double cpu_freq = 1.5e9;          // cycles/s
  int core_count = 1;
  double cold_start_delay = 0.5;    // s
  int max_containers = 16;

  bool operator==(const ServerPowerParams&) const = default;
};

// Throws std::invalid_argument on the first violated field.
void check_params(const ServerPowerParams& params);

// Cold-start cost for C containers. `literal_power` is eta F^3 C D taken as
// Watts; `energy` reads the same product as Joules spent in the slot, and
// `slot_average_power` spreads that energy over the slot.
struct ColdStartPower {
  double literal_power = 0.0;
  double energy = 0.0;
  double slot_average_power = 0.0;
};

struct SlotPowerBreakdown {
  int slot = 0;
  int server_id = 0;
  double utilization = 0.0;
  double idle_power = 0.0;
  double dynamic_power = 0.0;
  double warm_power = 0.0;
  int cold_count = 0;
  std::vector<bool> cold_flags;
  double cold_power = 0.0;  // Pc_total, literal Watts
  double cold_energy = 0.0;
  double cold_slot_average_power = 0.0;
  double total_power = 0.0;  // P_s = warm_power + cold_power
  double energy = 0.0;       // total_power * slot_length
};

// gamma1 U + gamma2 U^2. Throws std::invalid_argument for U outside [0, 1].
double dynamic_power(double utilization, const ServerPowerParams& params);

double warm_power(double utilization, const ServerPowerParams& params);

// Throws OverCapacityError when count > max_containers.
ColdStartPower cold_start_power(int count, const ServerPowerParams& params,
                                double slot_length);

// Warm power plus one eta F^3 D term per set flag. Throws
// std::invalid_argument when the flag count differs from max_containers.
SlotPowerBreakdown total_server_power(double utilization,
                                      const std::vector<bool>& cold_flags,
                                      const ServerPowerParams& params,
                                      double slot_length, int slot = 0);

}  // namespace faaspipe

#endif  // FAASPIPE_POWER_H_
