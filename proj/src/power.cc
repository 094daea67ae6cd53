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

#include "faaspipe/power.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "faaspipe/errors.h"

namespace faaspipe {

void check_params(const ServerPowerParams& p) {
  auto require = [&](bool ok, const char* what) {
    if (!ok) {
      throw std::invalid_argument("server " + std::to_string(p.id) + ": " +
                                  what);
    }
  };
  require(p.idle_power > 0.0, "idle_power must be > 0");
  require(p.cpu_freq > 0.0, "cpu_freq must be > 0");
  require(p.cold_start_delay > 0.0, "cold_start_delay must be > 0");
  require(p.gamma1 >= 0.0 && p.gamma2 >= 0.0, "gamma1/gamma2 must be >= 0");
  require(p.eta >= 0.0, "eta must be >= 0");
  require(p.core_count >= 1, "core_count must be >= 1");
  require(p.max_containers >= 1, "max_containers must be >= 1");
}

double dynamic_power(double utilization, const ServerPowerParams& params) {
  if (!(utilization >= 0.0 && utilization <= 1.0)) {
    throw std::invalid_argument("utilization outside [0, 1]");
  }
  return params.gamma1 * utilization +
         params.gamma2 * utilization * utilization;
}

double warm_power(double utilization, const ServerPowerParams& params) {
  dynamic_power(utilization, params);  // range check
  return params.idle_power + params.gamma1 * utilization +
         params.gamma2 * utilization * utilization;
}

ColdStartPower cold_start_power(int count, const ServerPowerParams& params,
                                double slot_length) {
  if (count < 0) throw std::invalid_argument("negative cold-start count");
  if (count > params.max_containers) {
    throw OverCapacityError(count, params.max_containers);
  }
  if (!(slot_length > 0.0)) {
    throw std::invalid_argument("slot length must be > 0");
  }
  const double f = params.cpu_freq;
  ColdStartPower out;
  out.literal_power = params.eta * f * f * f * count * params.cold_start_delay;
  out.energy = out.literal_power;
  out.slot_average_power = out.energy / slot_length;
  return out;
}

SlotPowerBreakdown total_server_power(double utilization,
                                      const std::vector<bool>& cold_flags,
                                      const ServerPowerParams& params,
                                      double slot_length, int slot) {
  if (static_cast<int>(cold_flags.size()) != params.max_containers) {
    throw std::invalid_argument(
        "cold flag count " + std::to_string(cold_flags.size()) +
        " != max_containers " + std::to_string(params.max_containers));
  }
  SlotPowerBreakdown out;
  out.slot = slot;
  out.server_id = params.id;
  out.utilization = utilization;
  out.idle_power = params.idle_power;
  out.dynamic_power = dynamic_power(utilization, params);
  out.warm_power = warm_power(utilization, params);
  out.cold_flags = cold_flags;
  out.cold_count = static_cast<int>(
      std::count(cold_flags.begin(), cold_flags.end(), true));
  const ColdStartPower cold =
      cold_start_power(out.cold_count, params, slot_length);
  out.cold_power = cold.literal_power;
  out.cold_energy = cold.energy;
  out.cold_slot_average_power = cold.slot_average_power;
  out.total_power = out.warm_power + out.cold_power;
  out.energy = out.total_power * slot_length;
  return out;
}

}  // namespace faaspipe
