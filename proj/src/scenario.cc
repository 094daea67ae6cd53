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

#include "faaspipe/scenario.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "faaspipe/toml_lite.h"

namespace faaspipe {

const char* to_string(PlacementPolicy p) {
  return p == PlacementPolicy::kSingle ? "single" : "round_robin";
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kLambda: return "lambda";
    case SweepAxis::kReplicas: return "replicas";
    case SweepAxis::kColdDelay: return "cold_delay";
    case SweepAxis::kContainers: return "containers";
    case SweepAxis::kUtilization: return "utilization";
  }
  return "?";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view name) {
  for (SweepAxis axis : {SweepAxis::kLambda, SweepAxis::kReplicas,
                         SweepAxis::kColdDelay, SweepAxis::kContainers,
                         SweepAxis::kUtilization}) {
    if (name == to_string(axis)) return axis;
  }
  return std::nullopt;
}

namespace {

std::string snap(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::vector<double> SweepSpec::points() const {
  std::vector<double> out;
  if (!(step > 0.0) || to < from) return out;
  const auto count =
      static_cast<long long>(std::floor((to - from) / step + 1e-9)) + 1;
  for (long long i = 0; i < count; ++i) {
    // Snap to 12 significant digits so 0.15 + 3 * 0.1 reads as 0.45.
    const double raw = from + static_cast<double>(i) * step;
    out.push_back(std::stod(snap(raw)));
  }
  return out;
}

std::size_t ScenarioConfig::host_server(std::size_t f) const {
  if (placement == PlacementPolicy::kSingle || servers.empty()) return 0;
  return f % servers.size();
}

std::optional<std::size_t> ScenarioConfig::route(std::string_view topic) const {
  for (std::size_t f = 0; f < functions.size(); ++f) {
    const auto& topics = functions[f].workload.topics;
    if (std::find(topics.begin(), topics.end(), topic) != topics.end()) {
      return f;
    }
  }
  return std::nullopt;
}

std::vector<double> ScenarioConfig::pool_rates(int slot) const {
  std::vector<double> rates(functions.size(), 0.0);
  for (const auto& fs : functions) {
    if (auto target = route(fs.workload.emitted_topic())) {
      rates[*target] += fs.workload.rate(grid, slot);
    }
  }
  return rates;
}

bool ScenarioConfig::packet_size_varies() const {
  return std::any_of(functions.begin(), functions.end(),
                     [&](const FunctionSpec& fs) {
                       return fs.workload.packet_size &&
                              *fs.workload.packet_size != channel.packet_size;
                     });
}

const SweepSpec* ScenarioConfig::find_sweep(SweepAxis axis) const {
  for (const auto& s : sweeps) {
    if (s.axis == axis) return &s;
  }
  return nullptr;
}

void set_horizon(ScenarioConfig& cfg, double horizon) {
  if (!(horizon > 0.0) || !(cfg.grid.slot_length > 0.0)) {
    throw std::invalid_argument("horizon and slot length must be positive");
  }
  const int slots = std::max(
      1, static_cast<int>(std::ceil(horizon / cfg.grid.slot_length - 1e-9)));
  cfg.grid.slot_count = slots;
  for (auto& fs : cfg.functions) {
    auto& rates = fs.workload.lambda_per_slot;
    const double last = rates.empty() ? 0.0 : rates.back();
    rates.resize(static_cast<std::size_t>(slots), last);
  }
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Checker {
 public:
  explicit Checker(std::vector<Violation>& out) : out_(out) {}

  void require(bool ok, const std::string& path, const std::string& reason) {
    if (!ok) out_.push_back({path, reason});
  }
  void positive(double v, const std::string& path) {
    require(v > 0.0 && std::isfinite(v), path, "must be finite and > 0");
  }
  void non_negative(double v, const std::string& path) {
    require(v >= 0.0 && std::isfinite(v), path, "must be finite and >= 0");
  }

 private:
  std::vector<Violation>& out_;
};

std::string indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

}  // namespace

std::vector<Violation> validate(const ScenarioConfig& cfg) {
  std::vector<Violation> out;
  Checker c(out);

  c.positive(cfg.grid.slot_length, "grid.slot_length");
  c.require(cfg.grid.slot_count >= 1, "grid.slot_count", "must be >= 1");

  const auto& ch = cfg.channel;
  c.positive(ch.bandwidth, "channel.bandwidth");
  c.non_negative(ch.channel_gain, "channel.channel_gain");
  c.positive(ch.tx_power, "channel.tx_power");
  c.positive(ch.noise_power, "channel.noise_power");
  c.positive(ch.packet_size, "channel.packet_size");
  if (cfg.stages.controller && ch.channel_gain == 0.0) {
    c.require(false, "channel.channel_gain",
              "zero gain leaves the controller with no service rate");
  }

  c.require(!cfg.functions.empty(), "function", "at least one is required");
  std::set<int> function_ids;
  for (std::size_t i = 0; i < cfg.functions.size(); ++i) {
    const auto& fs = cfg.functions[i];
    const auto& fc = fs.workload;
    const std::string base = indexed("function", i);
    c.require(fc.id >= 1, base + ".id", "must be >= 1");
    c.require(function_ids.insert(fc.id).second, base + ".id",
              "duplicate function id " + std::to_string(fc.id));
    c.require(static_cast<int>(fc.lambda_per_slot.size()) ==
                  cfg.grid.slot_count,
              base + ".lambda",
              "needs one rate per slot (" +
                  std::to_string(cfg.grid.slot_count) + ")");
    for (std::size_t j = 0; j < fc.lambda_per_slot.size(); ++j) {
      c.non_negative(fc.lambda_per_slot[j], indexed(base + ".lambda", j));
    }
    c.require(!fc.emitted_topic().empty(), base + ".topics",
              "needs at least one topic");
    c.require(fs.initial_replicas >= 0, base + ".initial_replicas",
              "must be >= 0");
    c.require(fs.n_max >= 1, base + ".n_max", "must be >= 1");
    c.require(fs.initial_replicas <= fs.n_max, base + ".initial_replicas",
              "exceeds n_max");
    if (fc.packet_size) c.positive(*fc.packet_size, base + ".packet_size");
  }

  c.require(!cfg.servers.empty(), "server", "at least one is required");
  std::set<int> server_ids;
  for (std::size_t i = 0; i < cfg.servers.size(); ++i) {
    const auto& s = cfg.servers[i];
    const std::string base = indexed("server", i);
    c.require(server_ids.insert(s.id).second, base + ".id",
              "duplicate server id " + std::to_string(s.id));
    c.positive(s.idle_power, base + ".idle_power");
    c.non_negative(s.gamma1, base + ".gamma1");
    c.non_negative(s.gamma2, base + ".gamma2");
    c.non_negative(s.eta, base + ".eta");
    c.positive(s.cpu_freq, base + ".cpu_freq");
    c.require(s.core_count >= 1, base + ".core_count", "must be >= 1");
    c.positive(s.cold_start_delay, base + ".cold_start_delay");
    c.require(s.max_containers >= 1, base + ".max_containers",
              "must be >= 1");
  }
  if (!cfg.servers.empty()) {
    std::vector<int> hosted(cfg.servers.size(), 0);
    for (std::size_t f = 0; f < cfg.functions.size(); ++f) {
      hosted[cfg.host_server(f)] += cfg.functions[f].initial_replicas;
    }
    for (std::size_t s = 0; s < hosted.size(); ++s) {
      c.require(hosted[s] <= cfg.servers[s].max_containers,
                indexed("server", s) + ".max_containers",
                "initial replicas placed here (" + std::to_string(hosted[s]) +
                    ") exceed the container limit");
    }
  }

  const auto& a = cfg.autoscaler;
  c.positive(a.threshold, "autoscaler.threshold");
  c.non_negative(a.rate_window, "autoscaler.rate_window");
  c.require(a.hysteresis >= 0.0 && a.hysteresis < 1.0,
            "autoscaler.hysteresis", "must be in [0, 1)");
  c.require(a.cooldown >= 0, "autoscaler.cooldown", "must be >= 0");
  c.require(a.floor >= 0, "autoscaler.floor", "must be >= 0");
  c.non_negative(a.idle_timeout, "autoscaler.idle_timeout");

  const auto& sim = cfg.simulation;
  c.require(!sim.seeds.empty(), "simulation.seeds", "at least one seed");
  c.require(sim.backlog_cap >= 1, "simulation.backlog_cap", "must be >= 1");
  c.require(sim.warmup_fraction >= 0.0 && sim.warmup_fraction < 1.0,
            "simulation.warmup_fraction", "must be in [0, 1)");
  c.require(sim.batches >= 2, "simulation.batches", "must be >= 2");

  for (std::size_t i = 0; i < cfg.sweeps.size(); ++i) {
    const auto& s = cfg.sweeps[i];
    const std::string base = indexed("sweep", i);
    c.require(std::isfinite(s.from), base + ".from", "must be finite");
    c.require(s.step > 0.0 && std::isfinite(s.step), base + ".step",
              "must be finite and > 0");
    c.require(s.to >= s.from && std::isfinite(s.to), base + ".to",
              "must be finite and >= from");
    if (s.function_id) {
      c.require(function_ids.count(*s.function_id) == 1,
                base + ".function_id", "does not name a function");
    }
    if (s.utilization) {
      c.require(*s.utilization >= 0.0 && *s.utilization <= 1.0,
                base + ".utilization", "must be in [0, 1]");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reading

namespace {

using toml_lite::Array;
using toml_lite::Table;
using toml_lite::Value;

class Reader {
 public:
  explicit Reader(std::vector<Violation>& out) : out_(out) {}

  void violation(const std::string& path, const std::string& reason) {
    out_.push_back({path, reason});
  }

  const Value* find(const Table& t, const std::string& key) {
    auto it = t.values.find(key);
    return it == t.values.end() ? nullptr : &it->second;
  }

  bool number(const Table& t, const std::string& key, const std::string& path,
              double& dst, bool required = false) {
    const Value* v = find(t, key);
    if (!v) {
      if (required) violation(path, "is required");
      return false;
    }
    if (!v->is_number()) {
      violation(path, "must be a number");
      return false;
    }
    dst = v->as_double();
    return true;
  }

  bool integer(const Table& t, const std::string& key, const std::string& path,
               long long& dst, bool required = false) {
    const Value* v = find(t, key);
    if (!v) {
      if (required) violation(path, "is required");
      return false;
    }
    const auto* i = std::get_if<std::int64_t>(&v->data);
    if (!i) {
      violation(path, "must be an integer");
      return false;
    }
    dst = *i;
    return true;
  }

  bool integer(const Table& t, const std::string& key, const std::string& path,
               int& dst, bool required = false) {
    long long wide = dst;
    if (!integer(t, key, path, wide, required)) return false;
    if (wide < INT32_MIN || wide > INT32_MAX) {
      violation(path, "out of range");
      return false;
    }
    dst = static_cast<int>(wide);
    return true;
  }

  bool boolean(const Table& t, const std::string& key, const std::string& path,
               bool& dst) {
    const Value* v = find(t, key);
    if (!v) return false;
    const auto* b = std::get_if<bool>(&v->data);
    if (!b) {
      violation(path, "must be true or false");
      return false;
    }
    dst = *b;
    return true;
  }

  bool string(const Table& t, const std::string& key, const std::string& path,
              std::string& dst, bool required = false) {
    const Value* v = find(t, key);
    if (!v) {
      if (required) violation(path, "is required");
      return false;
    }
    const auto* s = std::get_if<std::string>(&v->data);
    if (!s) {
      violation(path, "must be a string");
      return false;
    }
    dst = *s;
    return true;
  }

  bool string_list(const Table& t, const std::string& key,
                   const std::string& path, std::vector<std::string>& dst) {
    const Value* v = find(t, key);
    if (!v) return false;
    const auto* arr = std::get_if<Array>(&v->data);
    if (!arr) {
      violation(path, "must be an array of strings");
      return false;
    }
    dst.clear();
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto* s = std::get_if<std::string>(&(*arr)[i].data);
      if (!s) {
        violation(indexed(path, i), "must be a string");
        continue;
      }
      dst.push_back(*s);
    }
    return true;
  }

  void unknown_keys(const Table& t, const std::string& path,
                    std::initializer_list<std::string_view> known) {
    auto is_known = [&](const std::string& k) {
      return std::find(known.begin(), known.end(), k) != known.end();
    };
    auto where = [&](const std::string& k) {
      return path.empty() ? k : path + "." + k;
    };
    for (const auto& [k, v] : t.values) {
      if (!is_known(k)) violation(where(k), "unknown key");
    }
    for (const auto& [k, v] : t.tables) {
      if (!is_known(k)) violation(where(k), "unknown table");
    }
    for (const auto& [k, v] : t.table_arrays) {
      if (!is_known(k)) violation(where(k), "unknown table array");
    }
  }

  std::optional<ServiceDistribution> service(const Table& t,
                                             const std::string& base) {
    std::string kind_name;
    double mean = 0.0;
    double second = 0.0;
    const bool has_kind = string(t, "service", base + ".service", kind_name,
                                 true);
    const bool has_mean = number(t, "mean", base + ".mean", mean, true);
    const bool has_second =
        number(t, "second_moment", base + ".second_moment", second);
    if (!has_kind || !has_mean) return std::nullopt;
    const auto kind = parse_service_kind(kind_name);
    if (!kind) {
      violation(base + ".service",
                "unknown kind '" + kind_name +
                    "' (deterministic | exponential | general)");
      return std::nullopt;
    }
    if (!(mean > 0.0) || !std::isfinite(mean)) {
      violation(base + ".mean", "must be finite and > 0");
      return std::nullopt;
    }
    auto close = [](double a, double b) {
      return std::abs(a - b) <= 1e-12 * std::abs(b);
    };
    switch (*kind) {
      case ServiceKind::kDeterministic:
        if (has_second && !close(second, mean * mean)) {
          violation(base + ".second_moment",
                    "deterministic service requires second_moment = mean^2");
          return std::nullopt;
        }
        return ServiceDistribution::deterministic(mean);
      case ServiceKind::kExponential:
        if (has_second && !close(second, 2.0 * mean * mean)) {
          violation(base + ".second_moment",
                    "exponential service requires second_moment = 2*mean^2");
          return std::nullopt;
        }
        return ServiceDistribution::exponential(mean);
      case ServiceKind::kGeneralTwoMoment:
        if (!has_second) {
          violation(base + ".second_moment",
                    "is required for general service");
          return std::nullopt;
        }
        if (!(second >= mean * mean * (1.0 - 1e-12)) ||
            !std::isfinite(second)) {
          violation(base + ".second_moment", "must be >= mean^2");
          return std::nullopt;
        }
        return ServiceDistribution::general(mean, second);
    }
    return std::nullopt;
  }

 private:
  std::vector<Violation>& out_;
};

const Table kEmptyTable;

const Table& sub(const Table& t, const std::string& key) {
  auto it = t.tables.find(key);
  return it == t.tables.end() ? kEmptyTable : it->second;
}

const std::vector<Table>& subs(const Table& t, const std::string& key) {
  static const std::vector<Table> kNone;
  auto it = t.table_arrays.find(key);
  return it == t.table_arrays.end() ? kNone : it->second;
}

void read_function(Reader& r, const Table& t, const std::string& base,
                   int slot_count, FunctionSpec& fs) {
  r.unknown_keys(t, base,
                 {"id", "topics", "emit_topic", "lambda", "service", "mean",
                  "second_moment", "initial_replicas", "n_max",
                  "packet_size"});
  FunctionClass& fc = fs.workload;
  r.integer(t, "id", base + ".id", fc.id, true);
  if (!r.string_list(t, "topics", base + ".topics", fc.topics)) {
    fc.topics = {"topic-" + std::to_string(fc.id)};
  }
  r.string(t, "emit_topic", base + ".emit_topic", fc.emit_topic);
  if (auto sd = r.service(t, base)) fc.service = *sd;
  r.integer(t, "initial_replicas", base + ".initial_replicas",
            fs.initial_replicas);
  r.integer(t, "n_max", base + ".n_max", fs.n_max);
  double packet = 0.0;
  if (r.number(t, "packet_size", base + ".packet_size", packet)) {
    fc.packet_size = packet;
  }

  const Value* lambda = r.find(t, "lambda");
  if (!lambda) {
    r.violation(base + ".lambda", "is required");
    return;
  }
  if (lambda->is_number()) {
    fc.lambda_per_slot.assign(static_cast<std::size_t>(std::max(0, slot_count)),
                              lambda->as_double());
    return;
  }
  const auto* arr = std::get_if<Array>(&lambda->data);
  if (!arr) {
    r.violation(base + ".lambda", "must be a number or an array of numbers");
    return;
  }
  fc.lambda_per_slot.clear();
  for (std::size_t j = 0; j < arr->size(); ++j) {
    if (!(*arr)[j].is_number()) {
      r.violation(indexed(base + ".lambda", j), "must be a number");
      fc.lambda_per_slot.push_back(0.0);
      continue;
    }
    fc.lambda_per_slot.push_back((*arr)[j].as_double());
  }
}

void read_server(Reader& r, const Table& t, const std::string& base,
                 ServerPowerParams& s) {
  r.unknown_keys(t, base,
                 {"id", "idle_power", "gamma1", "gamma2", "eta", "cpu_freq",
                  "core_count", "cold_start_delay", "max_containers"});
  r.integer(t, "id", base + ".id", s.id);
  r.number(t, "idle_power", base + ".idle_power", s.idle_power, true);
  r.number(t, "gamma1", base + ".gamma1", s.gamma1, true);
  r.number(t, "gamma2", base + ".gamma2", s.gamma2, true);
  r.number(t, "eta", base + ".eta", s.eta);
  r.number(t, "cpu_freq", base + ".cpu_freq", s.cpu_freq, true);
  r.integer(t, "core_count", base + ".core_count", s.core_count);
  r.number(t, "cold_start_delay", base + ".cold_start_delay",
           s.cold_start_delay, true);
  r.integer(t, "max_containers", base + ".max_containers", s.max_containers);
}

void read_sweep(Reader& r, const Table& t, const std::string& base,
                SweepSpec& s) {
  r.unknown_keys(t, base,
                 {"axis", "from", "to", "step", "function_id", "utilization"});
  std::string axis;
  if (r.string(t, "axis", base + ".axis", axis, true)) {
    if (auto parsed = parse_sweep_axis(axis)) {
      s.axis = *parsed;
    } else {
      r.violation(base + ".axis", "unknown axis '" + axis + "'");
    }
  }
  r.number(t, "from", base + ".from", s.from, true);
  r.number(t, "to", base + ".to", s.to, true);
  r.number(t, "step", base + ".step", s.step, true);
  int fid = 0;
  if (r.integer(t, "function_id", base + ".function_id", fid)) {
    s.function_id = fid;
  }
  double u = 0.0;
  if (r.number(t, "utilization", base + ".utilization", u)) {
    s.utilization = u;
  }
}

ScenarioConfig read_config(const Table& root) {
  std::vector<Violation> violations;
  Reader r(violations);
  ScenarioConfig cfg;

  r.unknown_keys(root, "",
                 {"name", "wait_formula", "grid", "channel", "pipeline",
                  "gateway", "placement", "autoscaler", "simulation", "output",
                  "function", "server", "sweep"});
  r.string(root, "name", "name", cfg.name);
  std::string formula;
  if (r.string(root, "wait_formula", "wait_formula", formula)) {
    if (auto f = parse_wait_formula(formula)) {
      cfg.wait_formula = *f;
    } else {
      r.violation("wait_formula",
                  "unknown formula '" + formula +
                      "' (general | literal)");
    }
  }

  const Table& grid = sub(root, "grid");
  r.unknown_keys(grid, "grid", {"slot_length", "slot_count"});
  r.number(grid, "slot_length", "grid.slot_length", cfg.grid.slot_length,
           true);
  r.integer(grid, "slot_count", "grid.slot_count", cfg.grid.slot_count, true);

  const Table& ch = sub(root, "channel");
  r.unknown_keys(ch, "channel",
                 {"bandwidth", "channel_gain", "tx_power", "noise_power",
                  "packet_size"});
  r.number(ch, "bandwidth", "channel.bandwidth", cfg.channel.bandwidth, true);
  r.number(ch, "channel_gain", "channel.channel_gain",
           cfg.channel.channel_gain, true);
  r.number(ch, "tx_power", "channel.tx_power", cfg.channel.tx_power, true);
  r.number(ch, "noise_power", "channel.noise_power", cfg.channel.noise_power,
           true);
  r.number(ch, "packet_size", "channel.packet_size", cfg.channel.packet_size,
           true);

  const Table& pipe = sub(root, "pipeline");
  r.unknown_keys(pipe, "pipeline", {"controller", "gateway", "functions"});
  r.boolean(pipe, "controller", "pipeline.controller", cfg.stages.controller);
  r.boolean(pipe, "gateway", "pipeline.gateway", cfg.stages.gateway);
  r.boolean(pipe, "functions", "pipeline.functions", cfg.stages.functions);

  const Table& gw = sub(root, "gateway");
  r.unknown_keys(gw, "gateway", {"service", "mean", "second_moment"});
  if (root.tables.count("gateway")) {
    if (auto sd = r.service(gw, "gateway")) cfg.gateway_service = *sd;
  } else if (cfg.stages.gateway) {
    r.violation("gateway", "is required unless pipeline.gateway = false");
  }

  const Table& place = sub(root, "placement");
  r.unknown_keys(place, "placement", {"policy"});
  std::string policy;
  if (r.string(place, "policy", "placement.policy", policy)) {
    if (policy == "single") {
      cfg.placement = PlacementPolicy::kSingle;
    } else if (policy == "round_robin") {
      cfg.placement = PlacementPolicy::kRoundRobin;
    } else {
      r.violation("placement.policy",
                  "unknown policy '" + policy + "' (single | round_robin)");
    }
  }

  const Table& as = sub(root, "autoscaler");
  r.unknown_keys(as, "autoscaler",
                 {"enabled", "threshold", "evaluation", "estimator",
                  "rate_window", "scale_down", "hysteresis", "cooldown",
                  "floor", "on_demand_launch", "idle_timeout"});
  auto& a = cfg.autoscaler;
  r.boolean(as, "enabled", "autoscaler.enabled", a.enabled);
  r.number(as, "threshold", "autoscaler.threshold", a.threshold);
  std::string name;
  if (r.string(as, "evaluation", "autoscaler.evaluation", name)) {
    if (auto e = parse_evaluation(name)) {
      a.evaluation = *e;
    } else {
      r.violation("autoscaler.evaluation",
                  "unknown mode '" + name + "' (per_event | per_slot)");
    }
  }
  if (r.string(as, "estimator", "autoscaler.estimator", name)) {
    if (auto e = parse_estimator(name)) {
      a.estimator = *e;
    } else {
      r.violation("autoscaler.estimator",
                  "unknown estimator '" + name +
                      "' (analytic_from_measured_rate | measured_wait)");
    }
  }
  r.number(as, "rate_window", "autoscaler.rate_window", a.rate_window);
  r.boolean(as, "scale_down", "autoscaler.scale_down", a.scale_down_enabled);
  r.number(as, "hysteresis", "autoscaler.hysteresis", a.hysteresis);
  r.integer(as, "cooldown", "autoscaler.cooldown", a.cooldown);
  r.integer(as, "floor", "autoscaler.floor", a.floor);
  r.boolean(as, "on_demand_launch", "autoscaler.on_demand_launch",
            a.on_demand_launch);
  r.number(as, "idle_timeout", "autoscaler.idle_timeout", a.idle_timeout);

  const Table& sim = sub(root, "simulation");
  r.unknown_keys(sim, "simulation",
                 {"seeds", "backlog_cap", "warmup_fraction", "batches"});
  if (const Value* seeds = r.find(sim, "seeds")) {
    const auto* arr = std::get_if<Array>(&seeds->data);
    if (!arr) {
      r.violation("simulation.seeds", "must be an array of integers");
    } else {
      cfg.simulation.seeds.clear();
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const auto* v = std::get_if<std::int64_t>(&(*arr)[i].data);
        if (!v || *v < 0) {
          r.violation(indexed("simulation.seeds", i),
                      "must be a non-negative integer");
          continue;
        }
        cfg.simulation.seeds.push_back(static_cast<std::uint64_t>(*v));
      }
    }
  }
  long long cap = static_cast<long long>(cfg.simulation.backlog_cap);
  if (r.integer(sim, "backlog_cap", "simulation.backlog_cap", cap)) {
    if (cap < 1) {
      r.violation("simulation.backlog_cap", "must be >= 1");
    } else {
      cfg.simulation.backlog_cap = static_cast<std::uint64_t>(cap);
    }
  }
  r.number(sim, "warmup_fraction", "simulation.warmup_fraction",
           cfg.simulation.warmup_fraction);
  r.integer(sim, "batches", "simulation.batches", cfg.simulation.batches);

  const Table& out = sub(root, "output");
  r.unknown_keys(out, "output", {"dir"});
  r.string(out, "dir", "output.dir", cfg.output_dir);

  const auto& functions = subs(root, "function");
  for (std::size_t i = 0; i < functions.size(); ++i) {
    FunctionSpec fs;
    fs.workload.id = static_cast<int>(i) + 1;
    read_function(r, functions[i], indexed("function", i),
                  cfg.grid.slot_count, fs);
    cfg.functions.push_back(std::move(fs));
  }
  const auto& servers = subs(root, "server");
  for (std::size_t i = 0; i < servers.size(); ++i) {
    ServerPowerParams s;
    s.id = static_cast<int>(i) + 1;
    read_server(r, servers[i], indexed("server", i), s);
    cfg.servers.push_back(s);
  }
  const auto& sweeps = subs(root, "sweep");
  for (std::size_t i = 0; i < sweeps.size(); ++i) {
    SweepSpec s;
    read_sweep(r, sweeps[i], indexed("sweep", i), s);
    cfg.sweeps.push_back(s);
  }

  // Range checks only make sense on fields that were read successfully, but
  // reporting them together gives the user the full list in one pass.
  for (auto& v : validate(cfg)) {
    const bool already = std::any_of(
        violations.begin(), violations.end(),
        [&](const Violation& w) { return w.path == v.path; });
    if (!already) violations.push_back(std::move(v));
  }
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return cfg;
}

}  // namespace

ScenarioConfig parse_scenario_text(std::string_view text) {
  Table root;
  try {
    root = toml_lite::parse(text);
  } catch (const toml_lite::ParseError& e) {
    std::vector<Violation> violations;
    for (const auto& s : e.errors()) {
      violations.push_back({"line " + std::to_string(s.line), s.message});
    }
    throw ConfigError(std::move(violations));
  }
  return read_config(root);
}

ScenarioConfig parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(std::vector<Violation>{
        {path.string(), "cannot read scenario file"}});
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario_text(text.str());
}

// ---------------------------------------------------------------------------
// Writing

namespace {

using toml_lite::format_double;
using toml_lite::quote;

void put(std::ostringstream& os, std::string_view key, double v) {
  os << key << " = " << format_double(v) << '\n';
}
void put(std::ostringstream& os, std::string_view key, long long v) {
  os << key << " = " << v << '\n';
}
void put(std::ostringstream& os, std::string_view key, int v) {
  put(os, key, static_cast<long long>(v));
}
void put(std::ostringstream& os, std::string_view key, bool v) {
  os << key << " = " << (v ? "true" : "false") << '\n';
}
void put(std::ostringstream& os, std::string_view key, std::string_view v) {
  os << key << " = " << quote(v) << '\n';
}

void put_service(std::ostringstream& os, const ServiceDistribution& sd) {
  put(os, "service", std::string_view(to_string(sd.kind())));
  put(os, "mean", sd.mean());
  if (sd.kind() == ServiceKind::kGeneralTwoMoment) {
    put(os, "second_moment", sd.second_moment());
  }
}

}  // namespace

std::string serialize_scenario(const ScenarioConfig& cfg) {
  std::ostringstream os;
  put(os, "name", std::string_view(cfg.name));
  put(os, "wait_formula", std::string_view(to_string(cfg.wait_formula)));

  os << "\n[grid]\n";
  put(os, "slot_length", cfg.grid.slot_length);
  put(os, "slot_count", cfg.grid.slot_count);

  os << "\n[channel]\n";
  put(os, "bandwidth", cfg.channel.bandwidth);
  put(os, "channel_gain", cfg.channel.channel_gain);
  put(os, "tx_power", cfg.channel.tx_power);
  put(os, "noise_power", cfg.channel.noise_power);
  put(os, "packet_size", cfg.channel.packet_size);

  os << "\n[pipeline]\n";
  put(os, "controller", cfg.stages.controller);
  put(os, "gateway", cfg.stages.gateway);
  put(os, "functions", cfg.stages.functions);

  os << "\n[gateway]\n";
  put_service(os, cfg.gateway_service);

  os << "\n[placement]\n";
  put(os, "policy", std::string_view(to_string(cfg.placement)));

  const auto& a = cfg.autoscaler;
  os << "\n[autoscaler]\n";
  put(os, "enabled", a.enabled);
  put(os, "threshold", a.threshold);
  put(os, "evaluation", std::string_view(to_string(a.evaluation)));
  put(os, "estimator", std::string_view(to_string(a.estimator)));
  put(os, "rate_window", a.rate_window);
  put(os, "scale_down", a.scale_down_enabled);
  put(os, "hysteresis", a.hysteresis);
  put(os, "cooldown", a.cooldown);
  put(os, "floor", a.floor);
  put(os, "on_demand_launch", a.on_demand_launch);
  put(os, "idle_timeout", a.idle_timeout);

  os << "\n[simulation]\nseeds = [";
  for (std::size_t i = 0; i < cfg.simulation.seeds.size(); ++i) {
    os << (i ? ", " : "") << cfg.simulation.seeds[i];
  }
  os << "]\n";
  put(os, "backlog_cap", static_cast<long long>(cfg.simulation.backlog_cap));
  put(os, "warmup_fraction", cfg.simulation.warmup_fraction);
  put(os, "batches", cfg.simulation.batches);

  if (!cfg.output_dir.empty()) {
    os << "\n[output]\n";
    put(os, "dir", std::string_view(cfg.output_dir));
  }

  for (const auto& fs : cfg.functions) {
    const auto& fc = fs.workload;
    os << "\n[[function]]\n";
    put(os, "id", fc.id);
    os << "topics = [";
    for (std::size_t i = 0; i < fc.topics.size(); ++i) {
      os << (i ? ", " : "") << quote(fc.topics[i]);
    }
    os << "]\n";
    if (!fc.emit_topic.empty()) {
      put(os, "emit_topic", std::string_view(fc.emit_topic));
    }
    const auto& rates = fc.lambda_per_slot;
    const bool constant =
        !rates.empty() &&
        std::all_of(rates.begin(), rates.end(),
                    [&](double r) { return r == rates.front(); }) &&
        static_cast<int>(rates.size()) == cfg.grid.slot_count;
    if (constant) {
      put(os, "lambda", rates.front());
    } else {
      os << "lambda = [";
      for (std::size_t i = 0; i < rates.size(); ++i) {
        os << (i ? ", " : "") << format_double(rates[i]);
      }
      os << "]\n";
    }
    put_service(os, fc.service);
    put(os, "initial_replicas", fs.initial_replicas);
    put(os, "n_max", fs.n_max);
    if (fc.packet_size) put(os, "packet_size", *fc.packet_size);
  }

  for (const auto& s : cfg.servers) {
    os << "\n[[server]]\n";
    put(os, "id", s.id);
    put(os, "idle_power", s.idle_power);
    put(os, "gamma1", s.gamma1);
    put(os, "gamma2", s.gamma2);
    put(os, "eta", s.eta);
    put(os, "cpu_freq", s.cpu_freq);
    put(os, "core_count", s.core_count);
    put(os, "cold_start_delay", s.cold_start_delay);
    put(os, "max_containers", s.max_containers);
  }

  for (const auto& s : cfg.sweeps) {
    os << "\n[[sweep]]\n";
    put(os, "axis", std::string_view(to_string(s.axis)));
    put(os, "from", s.from);
    put(os, "to", s.to);
    put(os, "step", s.step);
    if (s.function_id) put(os, "function_id", *s.function_id);
    if (s.utilization) put(os, "utilization", *s.utilization);
  }
  return os.str();
}

std::string config_digest(const ScenarioConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_scenario(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace faaspipe
