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


#ifndef FAASPIPE_COMPARE_H_
#define FAASPIPE_COMPARE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "faaspipe/analytic.h"
#include "faaspipe/scenario.h"

namespace faaspipe {

struct Tolerances {
  double single_server = 0.03;  // TS, Wg, Tg
  double pool = 0.05;           // Wf, Tf, T, U, P_s, energy
};

struct BatchMeans {
  double mean = 0.0;
  std::optional<double> half_width;  // 95% CI; unset with < 2 batches
  std::size_t used = 0;              // samples after truncation
};

// Drops the leading `warmup_fraction` of samples, splits the rest into
// `batches` equal batches and returns the grand mean of the batch means.
BatchMeans batch_means(std::span<const double> samples,
                       double warmup_fraction, int batches);

struct ComparisonRow {
  std::uint64_t seed = 0;
  std::string metric;  // TS, Wg, Tg, Wf, Tf, T, U, P_s, energy
  int subject = 0;     // function id, server id, or 0 for shared stages
  Metric analytic;
  double simulated = 0.0;
  std::optional<double> half_width;
  double error = 0.0;     // relative, or absolute when analytic is 0
  bool relative = true;
  double tolerance = 0.0;
  bool pass = false;
};

struct ComparisonReport {
  std::string digest;
  WaitFormula wait_formula = WaitFormula::kGeneral;
  std::vector<ComparisonRow> rows;

  bool passed() const;
};

// Needs constant rates and a fixed replica count; ConfigError otherwise.
ComparisonReport run_compare(const ScenarioConfig& cfg,
                             const Tolerances& tolerances);

}  // namespace faaspipe

#endif  // FAASPIPE_COMPARE_H_
