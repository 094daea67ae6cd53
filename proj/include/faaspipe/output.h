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


#ifndef FAASPIPE_OUTPUT_H_
#define FAASPIPE_OUTPUT_H_

#include <string>
#include <vector>

#include "faaspipe/analytic.h"
#include "faaspipe/compare.h"
#include "faaspipe/scenario.h"
#include "faaspipe/simulation.h"
#include "faaspipe/sweep.h"

// CSV and summary renderers. Numbers use the shortest round-trip form with
// '.' as decimal separator; metrics without a value print their status.
namespace faaspipe {

std::string csv_number(double value);
std::string csv_metric(const Metric& m);

std::string analytic_report_csv(const ScenarioConfig& cfg,
                                const AnalyticReport& report);
std::string analytic_trace_csv(const ScenarioConfig& cfg,
                               const AnalyticReport& report);
std::string analytic_summary(const ScenarioConfig& cfg,
                             const AnalyticReport& report);

std::string sim_report_csv(const ScenarioConfig& cfg,
                           const std::vector<SimReport>& runs);
std::string sim_trace_csv(const std::vector<SimReport>& runs);
std::string sim_replicas_csv(const ScenarioConfig& cfg,
                             const std::vector<SimReport>& runs);
std::string sim_summary(const ScenarioConfig& cfg,
                        const std::vector<SimReport>& runs);

std::string compare_csv(const ComparisonReport& report);
std::string compare_summary(const ScenarioConfig& cfg,
                            const ComparisonReport& report);

std::string sweep_csv(const SweepResult& result);
std::string sweep_summary(const ScenarioConfig& cfg,
                          const SweepResult& result);

}  // namespace faaspipe

#endif  // FAASPIPE_OUTPUT_H_
