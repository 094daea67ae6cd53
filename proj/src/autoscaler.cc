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

#include "faaspipe/autoscaler.h"

#include <limits>

#include "faaspipe/errors.h"

namespace faaspipe {

const char* to_string(Evaluation e) {
  return e == Evaluation::kPerEvent ? "per_event" : "per_slot";
}

const char* to_string(Estimator e) {
  return e == Estimator::kAnalyticFromMeasuredRate
             ? "analytic_from_measured_rate"
             : "measured_wait";
}

std::optional<Evaluation> parse_evaluation(std::string_view name) {
  if (name == "per_event") return Evaluation::kPerEvent;
  if (name == "per_slot") return Evaluation::kPerSlot;
  return std::nullopt;
}

std::optional<Estimator> parse_estimator(std::string_view name) {
  if (name == "analytic_from_measured_rate") {
    return Estimator::kAnalyticFromMeasuredRate;
  }
  if (name == "measured_wait") return Estimator::kMeasuredWait;
  return std::nullopt;
}

namespace {

double analytic_wait(const ServiceDistribution& service, int replicas,
                     double rate, WaitFormula formula) {
  try {
    return mgn_wait(rate, service, replicas, formula);
  } catch (const UnstableError&) {
  } catch (const NoReplicaError&) {
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

double estimate_wait(const AutoscalerPolicy& policy,
                     const ServiceDistribution& service, int replicas,
                     const LoadEstimate& load, WaitFormula formula) {
  if (replicas <= 0) return std::numeric_limits<double>::infinity();
  if (policy.estimator == Estimator::kMeasuredWait) return load.measured_wait;
  return analytic_wait(service, replicas, load.arrival_rate, formula);
}

bool scale_down_condition(const AutoscalerPolicy& policy,
                          const ServiceDistribution& service, int replicas,
                          const LoadEstimate& load, WaitFormula formula) {
  const double smaller =
      analytic_wait(service, replicas - 1, load.arrival_rate, formula);
  return smaller < policy.threshold * (1.0 - policy.hysteresis);
}

ScalingDecision autoscale_step(const PoolStatus& pool,
                               const AutoscalerPolicy& policy,
                               const ServiceDistribution& service,
                               const LoadEstimate& load, int slot,
                               bool slot_end, WaitFormula formula) {
  ScalingDecision decision;
  decision.estimated_wait =
      estimate_wait(policy, service, pool.replicas, load, formula);
  if (decision.estimated_wait >= policy.threshold) {
    if (pool.replicas >= pool.n_max) {
      decision.saturated = true;
      return decision;
    }
    const bool cooled = pool.last_scale_up_slot < 0 ||
                        slot - pool.last_scale_up_slot >= policy.cooldown;
    if (cooled) decision.action = ScalingAction::kScaleUp;
    return decision;
  }
  if (slot_end && policy.scale_down_enabled && pool.below_threshold_all_slot &&
      pool.replicas > policy.floor) {
    decision.action = ScalingAction::kScaleDown;
  }
  return decision;
}

}  // namespace faaspipe
