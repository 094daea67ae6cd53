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


#include "faaspipe/output.h"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace faaspipe {

std::string csv_number(double value) {
  if (!std::isfinite(value)) return "nonfinite";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string csv_metric(const Metric& m) {
  return m.ok() ? csv_number(m.value) : to_string(m.status);
}

namespace {

// Joins cells with commas and ends the line.
class Line {
 public:
  explicit Line(std::ostringstream& out) : out_(out) {}
  ~Line() { out_ << '\n'; }

  Line& operator<<(const std::string& cell) {
    if (!first_) out_ << ',';
    first_ = false;
    out_ << cell;
    return *this;
  }
  Line& operator<<(const char* cell) { return *this << std::string(cell); }
  Line& operator<<(double v) { return *this << csv_number(v); }
  Line& operator<<(int v) { return *this << std::to_string(v); }
  Line& operator<<(unsigned long v) { return *this << std::to_string(v); }
  Line& operator<<(unsigned long long v) {
    return *this << std::to_string(v);
  }
  Line& operator<<(bool v) { return *this << (v ? "1" : "0"); }
  Line& operator<<(const Metric& m) { return *this << csv_metric(m); }

 private:
  std::ostringstream& out_;
  bool first_ = true;
};

std::string first_seed(const ScenarioConfig& cfg) {
  return cfg.simulation.seeds.empty()
             ? "0"
             : std::to_string(cfg.simulation.seeds.front());
}

void power_columns(Line& line, const SlotPowerBreakdown& bd) {
  line << bd.utilization << bd.idle_power << bd.dynamic_power
       << bd.warm_power << bd.cold_count << bd.cold_power << bd.cold_energy
       << bd.cold_slot_average_power << bd.total_power << bd.energy;
}

constexpr const char* kPowerHeader =
    "utilization,idle_power,dynamic_power,warm_power,cold_count,cold_power,"
    "cold_energy,cold_slot_average_power,total_power,energy";

void label_lines(std::ostringstream& out, const ScenarioConfig& cfg) {
  out << "scenario: " << cfg.name << '\n';
  out << "config digest: " << config_digest(cfg) << '\n';
  out << "wait formula: " << to_string(cfg.wait_formula) << '\n';
  out << "function service term: b_m (mean service time of function m)\n";
  out << "packet size: "
      << (cfg.packet_size_varies()
              ? "varies by function; controller formulas use the channel "
                "packet size"
              : "common to all functions")
      << '\n';
}

}  // namespace

std::string analytic_report_csv(const ScenarioConfig& cfg,
                                const AnalyticReport& report) {
  std::ostringstream out;
  const std::string seed = first_seed(cfg);
  out << "digest,seed,slot,function_id,lambda_total,lambda,replicas,ts,wg,tg,"
         "tp,wf,tf,total,utilization,saturated,wait_formula,common_phi\n";
  for (const auto& slot : report.slots) {
    for (const auto& f : slot.functions) {
      Line line(out);
      line << report.digest << seed << slot.slot << f.function_id
           << slot.lambda_total << f.lambda << f.replicas << slot.ts
           << slot.wg << slot.tg << slot.tp << f.wf << f.tf << f.total
           << f.utilization << f.saturated << to_string(report.wait_formula)
           << !report.packet_size_varies;
    }
  }
  return out.str();
}

std::string analytic_trace_csv(const ScenarioConfig& cfg,
                               const AnalyticReport& report) {
  std::ostringstream out;
  const std::string seed = first_seed(cfg);
  out << "digest,seed,slot,server_id," << kPowerHeader << '\n';
  for (const auto& slot : report.slots) {
    for (const auto& bd : slot.power) {
      Line line(out);
      line << report.digest << seed << slot.slot << bd.server_id;
      power_columns(line, bd);
    }
  }
  return out.str();
}

std::string analytic_summary(const ScenarioConfig& cfg,
                             const AnalyticReport& report) {
  std::ostringstream out;
  label_lines(out, cfg);
  out << "slots: " << report.slots.size() << '\n';
  out << "total energy (J): " << csv_number(report.total_energy) << '\n';
  out << "stability: "
      << (report.any_unstable ? "UNSTABLE markers present" : "all stable")
      << '\n';
  for (const auto& slot : report.slots) {
    for (const auto& f : slot.functions) {
      if (!f.total.ok()) {
        out << "  slot " << slot.slot << " function " << f.function_id
            << ": " << to_string(f.total.status) << '\n';
      }
    }
  }
  return out.str();
}

std::string sim_report_csv(const ScenarioConfig& cfg,
                           const std::vector<SimReport>& runs) {
  std::ostringstream out;
  out << "digest,seed,function_id,generated,completed,in_flight,dropped,"
         "mean_ts,mean_tg,mean_wf,mean_tf,mean_total,p50_total,p95_total,"
         "p99_total,utilization,max_replicas,saturated,unbounded_growth,"
         "wait_formula,common_phi\n";
  for (const auto& run : runs) {
    for (std::size_t f = 0; f < run.functions.size(); ++f) {
      const auto& fs = run.functions[f];
      Line line(out);
      line << run.digest << run.seed << fs.id << fs.generated << fs.completed
           << fs.in_flight << fs.dropped << fs.mean_ts << fs.mean_tg
           << fs.mean_wf << fs.mean_tf << fs.mean_total << fs.p50_total
           << fs.p95_total << fs.p99_total << fs.utilization
           << fs.max_replicas << fs.saturated << run.unbounded_growth
           << to_string(cfg.wait_formula) << !run.packet_size_varies;
    }
  }
  return out.str();
}

std::string sim_trace_csv(const std::vector<SimReport>& runs) {
  std::ostringstream out;
  out << "digest,seed,slot,server_id," << kPowerHeader << '\n';
  for (const auto& run : runs) {
    for (const auto& slot : run.slots) {
      for (const auto& bd : slot.power) {
        Line line(out);
        line << run.digest << run.seed << slot.slot << bd.server_id;
        power_columns(line, bd);
      }
    }
  }
  return out.str();
}

std::string sim_replicas_csv(const ScenarioConfig& cfg,
                             const std::vector<SimReport>& runs) {
  std::ostringstream out;
  out << "digest,seed,slot,function_id,replicas_end,replicas_max,cold_starts,"
         "utilization\n";
  for (const auto& run : runs) {
    for (const auto& slot : run.slots) {
      for (std::size_t f = 0; f < slot.replicas_end.size(); ++f) {
        Line line(out);
        line << run.digest << run.seed << slot.slot
             << cfg.functions[f].workload.id << slot.replicas_end[f]
             << slot.replicas_max[f] << slot.cold_starts[f]
             << slot.utilization[f];
      }
    }
  }
  return out.str();
}

std::string sim_summary(const ScenarioConfig& cfg,
                        const std::vector<SimReport>& runs) {
  std::ostringstream out;
  label_lines(out, cfg);
  for (const auto& run : runs) {
    out << "seed " << run.seed << ": generated " << run.generated
        << ", completed " << run.completed << ", in flight " << run.in_flight
        << ", dropped " << run.dropped << ", energy (J) "
        << csv_number(run.total_energy) << '\n';
    const bool conserved =
        run.generated == run.completed + run.in_flight + run.dropped;
    out << "  conservation: " << (conserved ? "PASS" : "FAIL") << '\n';
    if (run.unbounded_growth) {
      out << "  queue growth: UNBOUNDED (backlog cap "
          << cfg.simulation.backlog_cap << " exceeded)\n";
    }
  }
  return out.str();
}

std::string compare_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "digest,seed,metric,subject,analytic,simulated,ci_half_width,error,"
         "error_kind,tolerance,pass,wait_formula\n";
  for (const auto& r : report.rows) {
    Line line(out);
    line << report.digest << r.seed << r.metric << r.subject << r.analytic
         << r.simulated
         << (r.half_width ? csv_number(*r.half_width) : std::string())
         << r.error << (r.relative ? "relative" : "absolute") << r.tolerance
         << r.pass << to_string(report.wait_formula);
  }
  return out.str();
}

std::string compare_summary(const ScenarioConfig& cfg,
                            const ComparisonReport& report) {
  std::ostringstream out;
  label_lines(out, cfg);
  out << "batch means: " << cfg.simulation.batches << " batches after "
      << csv_number(cfg.simulation.warmup_fraction * 100.0)
      << "% warm-up truncation\n";
  std::size_t failed = 0;
  for (const auto& r : report.rows) {
    if (r.pass) continue;
    ++failed;
    out << "FAIL seed " << r.seed << ' ' << r.metric << " subject "
        << r.subject << ": analytic " << csv_metric(r.analytic)
        << ", simulated " << csv_number(r.simulated) << ", error "
        << csv_number(r.error) << " > " << csv_number(r.tolerance) << '\n';
  }
  out << "result: " << (failed == 0 ? "PASS" : "FAIL") << " ("
      << report.rows.size() - failed << '/' << report.rows.size()
      << " rows within tolerance)\n";
  return out.str();
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "digest,seed,index,axis,value,function_id,lambda,replicas,"
         "analytic_wf,analytic_total,sim_total,analytic_utilization,"
         "analytic_cold_power,analytic_power,analytic_energy,sim_energy,"
         "sim_cold_starts,status\n";
  const char* axis = to_string(result.spec.axis);
  for (const auto& r : result.rows) {
    Line line(out);
    line << r.digest << r.seed << r.index << axis << r.value << r.function_id
         << r.lambda << r.replicas << r.analytic_wf << r.analytic_total
         << (r.simulated ? csv_number(r.sim_total) : std::string())
         << r.analytic_utilization << r.analytic_cold_power
         << r.analytic_power << r.analytic_energy
         << (r.simulated ? csv_number(r.sim_energy) : std::string())
         << (r.simulated ? std::to_string(r.sim_cold_starts) : std::string())
         << (r.error.empty() ? std::string("ok") : "error: " + r.error);
  }
  return out.str();
}

std::string sweep_summary(const ScenarioConfig& cfg,
                          const SweepResult& result) {
  std::ostringstream out;
  label_lines(out, cfg);
  out << "sweep axis: " << to_string(result.spec.axis) << " from "
      << csv_number(result.spec.from) << " to " << csv_number(result.spec.to)
      << " step " << csv_number(result.spec.step) << '\n';
  out << "rows: " << result.rows.size() << '\n';
  for (const auto& r : result.rows) {
    if (!r.error.empty()) {
      out << "ERROR point " << r.index << " seed " << r.seed << ": "
          << r.error << '\n';
    }
  }
  for (const auto& c : result.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.pass) out << ": " << c.detail;
    out << '\n';
  }
  out << "result: " << (result.passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

}  // namespace faaspipe
