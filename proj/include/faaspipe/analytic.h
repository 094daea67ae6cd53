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


#ifndef FAASPIPE_ANALYTIC_H_
#define FAASPIPE_ANALYTIC_H_

#include <string>
#include <vector>

#include "faaspipe/power.h"
#include "faaspipe/scenario.h"

namespace faaspipe {

enum class MetricStatus { kOk, kUnstable, kNoReplica };

const char* to_string(MetricStatus status);

// A closed-form value, or the reason it does not exist.
struct Metric {
  double value = 0.0;
  MetricStatus status = MetricStatus::kOk;

  bool ok() const { return status == MetricStatus::kOk; }
  static Metric Of(double v) { return {v, MetricStatus::kOk}; }
  static Metric Unstable() { return {0.0, MetricStatus::kUnstable}; }
  static Metric NoReplica() { return {0.0, MetricStatus::kNoReplica}; }
};

// Adds two metrics; the first failure wins.
Metric operator+(const Metric& a, const Metric& b);

struct FunctionSlotResult {
  int function_id = 0;
  int replicas = 0;
  double lambda = 0.0;  // arrivals reaching the pool
  Metric wf;
  Metric tf;
  Metric total;  // T_m = TS + Tg + Tf_m
  Metric utilization;
  bool saturated = false;  // wanted more replicas than n_max or containers
};

struct AnalyticSlot {
  int slot = 0;
  double lambda_total = 0.0;
  Metric ts;
  Metric wg;
  Metric tg;
  Metric tp;
  std::vector<FunctionSlotResult> functions;
  std::vector<SlotPowerBreakdown> power;  // per server
};

struct AnalyticReport {
  std::string digest;
  WaitFormula wait_formula = WaitFormula::kGeneral;
  bool packet_size_varies = false;
  std::vector<AnalyticSlot> slots;
  double total_energy = 0.0;
  bool any_unstable = false;
};

// Replica count per slot (index 0 is slot 1). With the autoscaler on, the
// pool grows to the smallest count meeting the threshold and never shrinks.
std::vector<int> analytic_replicas(const ScenarioConfig& cfg, std::size_t f);

// Never throws for unstable inputs; ConfigError for invalid ones.
AnalyticReport run_analytic(const ScenarioConfig& cfg);

}  // namespace faaspipe

#endif  // FAASPIPE_ANALYTIC_H_
