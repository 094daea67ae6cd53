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


#include "faaspipe/compare.h"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "faaspipe/errors.h"
#include "faaspipe/simulation.h"

namespace faaspipe {

BatchMeans batch_means(std::span<const double> samples,
                       double warmup_fraction, int batches) {
  BatchMeans out;
  const auto skip = static_cast<std::size_t>(
      std::floor(warmup_fraction * static_cast<double>(samples.size())));
  const auto kept = samples.subspan(std::min(skip, samples.size()));
  out.used = kept.size();
  if (kept.empty()) return out;
  const auto b = static_cast<std::size_t>(std::max(batches, 1));
  const std::size_t per = kept.size() / b;
  if (per == 0 || b < 2) {
    double sum = 0.0;
    for (double x : kept) sum += x;
    out.mean = sum / static_cast<double>(kept.size());
    return out;
  }
  std::vector<double> means(b, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    double sum = 0.0;
    for (std::size_t j = i * per; j < (i + 1) * per; ++j) sum += kept[j];
    means[i] = sum / static_cast<double>(per);
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= static_cast<double>(b);
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  const double sd = std::sqrt(ss / static_cast<double>(b - 1));
  const boost::math::students_t dist(static_cast<double>(b - 1));
  const double t = boost::math::quantile(dist, 0.975);
  out.mean = grand;
  out.half_width = t * sd / std::sqrt(static_cast<double>(b));
  return out;
}

bool ComparisonReport::passed() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ComparisonRow& r) { return r.pass; });
}

namespace {

void check_comparable(const ScenarioConfig& cfg) {
  std::vector<Violation> v;
  if (cfg.autoscaler.enabled) {
    v.push_back({"autoscaler.enabled",
                 "comparison needs a fixed replica count"});
  }
  for (std::size_t f = 0; f < cfg.functions.size(); ++f) {
    const auto& rates = cfg.functions[f].workload.lambda_per_slot;
    if (std::adjacent_find(rates.begin(), rates.end(),
                           std::not_equal_to<>()) != rates.end()) {
      v.push_back({"function[" + std::to_string(f) + "].lambda",
                   "comparison needs a constant rate"});
    }
  }
  if (!v.empty()) throw ConfigError(std::move(v));
}

ComparisonRow make_row(std::uint64_t seed, std::string metric, int subject,
                       const Metric& analytic, const BatchMeans& sim,
                       double tolerance) {
  ComparisonRow r;
  r.seed = seed;
  r.metric = std::move(metric);
  r.subject = subject;
  r.analytic = analytic;
  r.simulated = sim.mean;
  r.half_width = sim.half_width;
  r.tolerance = tolerance;
  if (!analytic.ok()) {
    r.pass = false;
    return r;
  }
  const double diff = std::fabs(sim.mean - analytic.value);
  r.relative = analytic.value != 0.0;
  r.error = r.relative ? diff / std::fabs(analytic.value) : diff;
  r.pass = std::isfinite(r.error) && r.error <= tolerance;
  return r;
}

}  // namespace

ComparisonReport run_compare(const ScenarioConfig& cfg,
                             const Tolerances& tolerances) {
  const AnalyticReport analytic = run_analytic(cfg);
  check_comparable(cfg);
  ComparisonReport report;
  report.digest = analytic.digest;
  report.wait_formula = cfg.wait_formula;
  const AnalyticSlot& ref = analytic.slots.front();
  const double warmup = cfg.simulation.warmup_fraction;
  const int batches = cfg.simulation.batches;
  const std::size_t ns = cfg.servers.size();

  SimOptions options;
  options.keep_events = true;
  for (std::uint64_t seed : cfg.simulation.seeds) {
    const SimReport sim = run_simulation(cfg, seed, options);

    std::vector<double> ts, wg, tg;
    for (const auto& e : sim.events) {
      if (e.status == EventStatus::kInFlight) continue;
      ts.push_back(e.ts());
      wg.push_back(e.wg());
      tg.push_back(e.tg());
    }
    const double m1 = tolerances.single_server;
    const double mn = tolerances.pool;
    report.rows.push_back(
        make_row(seed, "TS", 0, ref.ts, batch_means(ts, warmup, batches), m1));
    report.rows.push_back(
        make_row(seed, "Wg", 0, ref.wg, batch_means(wg, warmup, batches), m1));
    report.rows.push_back(
        make_row(seed, "Tg", 0, ref.tg, batch_means(tg, warmup, batches), m1));

    for (std::size_t f = 0; f < cfg.functions.size(); ++f) {
      const FunctionSlotResult& fr = ref.functions[f];
      const int id = fr.function_id;
      std::vector<double> wf, tf, total, util;
      for (const auto& e : sim.events) {
        if (e.status != EventStatus::kCompleted) continue;
        const bool mine = cfg.stages.functions ? e.pool == static_cast<int>(f)
                                               : e.function_id == id;
        if (!mine) continue;
        wf.push_back(e.wf());
        tf.push_back(e.tf());
        total.push_back(e.total());
      }
      for (const auto& slot : sim.slots) util.push_back(slot.utilization[f]);
      report.rows.push_back(make_row(seed, "Wf", id, fr.wf,
                                     batch_means(wf, warmup, batches), mn));
      report.rows.push_back(make_row(seed, "Tf", id, fr.tf,
                                     batch_means(tf, warmup, batches), mn));
      report.rows.push_back(make_row(seed, "T", id, fr.total,
                                     batch_means(total, warmup, batches), mn));
      report.rows.push_back(make_row(seed, "U", id, fr.utilization,
                                     batch_means(util, warmup, batches), mn));
    }
    for (std::size_t s = 0; s < ns; ++s) {
      std::vector<double> power;
      for (const auto& slot : sim.slots) power.push_back(slot.power[s].total_power);
      report.rows.push_back(make_row(
          seed, "P_s", cfg.servers[s].id,
          Metric::Of(ref.power[s].total_power),
          batch_means(power, warmup, batches), mn));
    }
    BatchMeans energy;
    energy.mean = sim.total_energy;
    report.rows.push_back(make_row(seed, "energy", 0,
                                   Metric::Of(analytic.total_energy), energy,
                                   mn));
  }
  return report;
}

}  // namespace faaspipe
