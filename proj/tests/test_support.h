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


#ifndef FAASPIPE_TESTS_TEST_SUPPORT_H_
#define FAASPIPE_TESTS_TEST_SUPPORT_H_

#include <vector>

#include "faaspipe/scenario.h"

namespace faaspipe::testing {

// One function on one server, controller and gateway negligible.
inline ScenarioConfig single_pool(double lambda, double mean, int replicas,
                                  double slot_length, int slot_count) {
  ScenarioConfig cfg;
  cfg.name = "test";
  cfg.grid = {slot_length, slot_count};
  cfg.channel.packet_size = 1.0;  // 1 us controller service
  cfg.gateway_service = ServiceDistribution::deterministic(1e-6);
  FunctionSpec fs;
  fs.workload.id = 1;
  fs.workload.topics = {"flow"};
  fs.workload.lambda_per_slot.assign(static_cast<std::size_t>(slot_count),
                                     lambda);
  fs.workload.service = ServiceDistribution::exponential(mean);
  fs.initial_replicas = replicas;
  fs.n_max = 10;
  cfg.functions.push_back(fs);
  cfg.servers.push_back(ServerPowerParams{});
  return cfg;
}

}  // namespace faaspipe::testing

#endif  // FAASPIPE_TESTS_TEST_SUPPORT_H_
