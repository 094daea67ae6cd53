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

#ifndef FAASPIPE_AUTOSCALER_H_
#define FAASPIPE_AUTOSCALER_H_

#include <optional>
#include <string_view>

#include "faaspipe/queueing.h"
#include "faaspipe/workload.h"

namespace faaspipe {

enum class Evaluation { kPerEvent, kPerSlot };
enum class Estimator { kAnalyticFromMeasuredRate, kMeasuredWait };

const char* to_string(Evaluation e);
const char* to_string(Estimator e);
std::optional<Evaluation> parse_evaluation(std::string_view name);
std::optional<Estimator> parse_estimator(std::string_view name);

// Threshold scaling of a replica pool: add a replica whenever the estimated
// wait reaches `threshold`.
struct AutoscalerPolicy {
  bool enabled = false;
  double threshold = 0.05;  // seconds
  Evaluation evaluation = Evaluation::kPerEvent;
  Estimator estimator = Estimator::kAnalyticFromMeasuredRate;
  // Sliding window for the measured arrival rate and waits. 0 = slot length.
  double rate_window = 0.0;
  bool scale_down_enabled = false;
  double hysteresis = 0.1;
  int cooldown = 0;  // slots between scale-ups
  int floor = 0;     // scale-down never goes below this
  // Launch a cold replica when an event reaches a pool with none.
  bool on_demand_launch = true;
  // Remove replicas idle this long. 0 = warm replicas never expire.
  double idle_timeout = 0.0;

  bool operator==(const AutoscalerPolicy&) const = default;
};

struct PoolStatus {
  int replicas = 0;
  int n_max = 1;
  int last_scale_up_slot = -1;  // -1: never scaled up
  // Scale-down condition held at every evaluation in the closing slot.
  bool below_threshold_all_slot = false;
};

struct LoadEstimate {
  double arrival_rate = 0.0;   // measured over the window, events/s
  double measured_wait = 0.0;  // mean observed wait over the window, s
};

enum class ScalingAction { kNone, kScaleUp, kScaleDown };

struct ScalingDecision {
  ScalingAction action = ScalingAction::kNone;
  bool saturated = false;  // wanted to scale up but the pool is at n_max
  double estimated_wait = 0.0;
};

// Wait the policy's estimator assigns to a pool of `replicas`. Unstable or
// empty pools estimate +infinity.
double estimate_wait(const AutoscalerPolicy& policy,
                     const ServiceDistribution& service, int replicas,
                     const LoadEstimate& load, WaitFormula formula);

// Whether a pool one replica smaller would still clear the threshold with
// the hysteresis margin.
bool scale_down_condition(const AutoscalerPolicy& policy,
                          const ServiceDistribution& service, int replicas,
                          const LoadEstimate& load, WaitFormula formula);

// One decision. Scale-down is only considered when `slot_end` is set.
ScalingDecision autoscale_step(const PoolStatus& pool,
                               const AutoscalerPolicy& policy,
                               const ServiceDistribution& service,
                               const LoadEstimate& load, int slot,
                               bool slot_end, WaitFormula formula);

}  // namespace faaspipe

#endif  // FAASPIPE_AUTOSCALER_H_
