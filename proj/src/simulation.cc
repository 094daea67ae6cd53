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

#include "faaspipe/simulation.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "faaspipe/autoscaler.h"
#include "faaspipe/errors.h"
#include "faaspipe/rng.h"

namespace faaspipe {

// ---------------------------------------------------------------------------
// ReplicaPool

int ReplicaPool::replicas() const {
  return static_cast<int>(std::count_if(
      replicas_.begin(), replicas_.end(),
      [](const Replica& r) { return r.alive && !r.retiring; }));
}

int ReplicaPool::count(ReplicaState state) const {
  return static_cast<int>(std::count_if(
      replicas_.begin(), replicas_.end(),
      [&](const Replica& r) { return r.alive && r.state == state; }));
}

int ReplicaPool::add_warm(int container, double now) {
  Replica r;
  r.state = ReplicaState::kIdle;
  r.ready_at = now;
  r.container = container;
  replicas_.push_back(r);
  return static_cast<int>(replicas_.size()) - 1;
}

int ReplicaPool::launch(int container, double now, double cold_delay) {
  Replica r;
  r.state = ReplicaState::kColdStarting;
  r.ready_at = now + cold_delay;
  r.container = container;
  replicas_.push_back(r);
  return static_cast<int>(replicas_.size()) - 1;
}

std::optional<int> ReplicaPool::first_idle() const {
  for (std::size_t i = 0; i < replicas_.size(); ++i) {
    const auto& r = replicas_[i];
    if (r.alive && !r.retiring && r.state == ReplicaState::kIdle) {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

std::optional<int> ReplicaPool::last_idle() const {
  for (std::size_t i = replicas_.size(); i-- > 0;) {
    const auto& r = replicas_[i];
    if (r.alive && !r.retiring && r.state == ReplicaState::kIdle) {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

std::optional<int> ReplicaPool::last_busy() const {
  for (std::size_t i = replicas_.size(); i-- > 0;) {
    const auto& r = replicas_[i];
    if (r.alive && !r.retiring && r.state == ReplicaState::kBusy) {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

void ReplicaPool::start_service(int r, std::uint32_t event, double now) {
  Replica& rep = replica(r);
  rep.state = ReplicaState::kBusy;
  rep.event = event;
  rep.busy_mark = now;
}

void ReplicaPool::remove(int r) {
  Replica& rep = replica(r);
  rep.alive = false;
  rep.retiring = false;
}

Assignment dispatch_event(ReplicaPool& pool, std::uint32_t event, double now,
                          std::optional<int> launch_container,
                          double cold_delay) {
  Assignment out;
  if (auto idle = pool.first_idle(); idle && pool.backlog().empty()) {
    pool.start_service(*idle, event, now);
    out.kind = Assignment::Kind::kStarted;
    out.replica = *idle;
    return out;
  }
  pool.backlog().push_back(event);
  if (pool.replicas() == 0 && launch_container) {
    out.kind = Assignment::Kind::kQueuedWithLaunch;
    out.replica = pool.launch(*launch_container, now, cold_delay);
  }
  return out;
}

std::vector<SlotPowerBreakdown> account_power(
    const std::vector<ServerSlotUsage>& usage, int slot,
    const std::vector<ServerPowerParams>& servers, double slot_length) {
  std::vector<SlotPowerBreakdown> out;
  out.reserve(servers.size());
  for (std::size_t s = 0; s < servers.size(); ++s) {
    const auto& params = servers[s];
    const ServerSlotUsage empty;
    const ServerSlotUsage& u = s < usage.size() ? usage[s] : empty;
    const int k = params.max_containers;
    if (static_cast<int>(u.cold_started.size()) > k) {
      throw OverCapacityError(static_cast<int>(u.cold_started.size()), k);
    }
    std::vector<bool> flags(static_cast<std::size_t>(k), false);
    for (int c : u.cold_started) {
      if (c < 0 || c >= k) throw OverCapacityError(c + 1, k);
      flags[static_cast<std::size_t>(c)] = true;
    }
    double util = u.busy_time / (params.core_count * slot_length);
    util = std::clamp(util, 0.0, 1.0);
    out.push_back(total_server_power(util, flags, params, slot_length, slot));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Engine

namespace {

enum class Kind : std::uint8_t {
  kArrival,
  kControllerDone,
  kGatewayDone,
  kServiceDone,
  kColdStartDone,
  kIdleExpire,
  kSlotEnd,
};

// Ties at equal time resolve controller -> gateway -> pool -> slot boundary,
// then by scheduling order.
int stage_priority(Kind k) {
  switch (k) {
    case Kind::kArrival:
    case Kind::kControllerDone:
      return 0;
    case Kind::kGatewayDone:
      return 1;
    case Kind::kServiceDone:
    case Kind::kColdStartDone:
    case Kind::kIdleExpire:
      return 2;
    case Kind::kSlotEnd:
      return 3;
  }
  return 3;
}

struct CalendarEntry {
  double time;
  int priority;
  std::uint64_t seq;
  Kind kind;
  std::uint32_t a;
  std::uint32_t b;
  std::uint64_t token;
};

struct Later {
  bool operator()(const CalendarEntry& x, const CalendarEntry& y) const {
    return std::tie(x.time, x.priority, x.seq) >
           std::tie(y.time, y.priority, y.seq);
  }
};

// Time integral of a counter.
struct Occupancy {
  std::uint64_t n = 0;
  double last = 0.0;
  double area = 0.0;

  void change(double now, int delta) {
    area += static_cast<double>(n) * (now - last);
    last = now;
    n = static_cast<std::uint64_t>(static_cast<long long>(n) + delta);
  }
  void close(double now) { change(now, 0); }
};

struct Arrival {
  double time;
  int function;  // generating function index
  int pool;      // routed function index, -1 when unmapped
  double size;
};

struct PoolRuntime {
  explicit PoolRuntime(Rng r) : rng(r) {}

  Rng rng;
  std::deque<double> window_arrivals;
  std::deque<std::pair<double, double>> window_waits;
  std::uint64_t slot_arrivals = 0;
  double slot_wait_sum = 0.0;
  std::uint64_t slot_wait_count = 0;
  double slot_busy = 0.0;
  int slot_cold = 0;
  int slot_max_replicas = 0;
  Occupancy replica_time;
  Occupancy in_system;
  double total_busy = 0.0;
  double total_replica_time = 0.0;
  int last_scale_up_slot = -1;
  bool below_all_slot = true;
  bool saturated = false;
  int max_replicas = 0;
  double wait_sum = 0.0;
  double sojourn_sum = 0.0;
  StageStats stats;
};

struct SingleServer {
  bool busy = false;
  std::deque<std::uint32_t> queue;
  Occupancy in_system;
  double wait_sum = 0.0;
  double sojourn_sum = 0.0;
  StageStats stats;
};

class Engine {
 public:
  Engine(const ScenarioConfig& cfg, std::uint64_t seed)
      : cfg_(cfg),
        seed_(seed),
        gateway_rng_(Rng::Substream(seed, StreamTag::kGatewayService)) {}

  SimReport run(const SimOptions& options);

 private:
  void schedule(double time, Kind kind, std::uint32_t a = 0,
                std::uint32_t b = 0, std::uint64_t token = 0) {
    calendar_.push({time, stage_priority(kind), next_seq_++, kind, a, b,
                    token});
  }

  void generate_arrivals();
  void on_arrival(std::uint32_t e);
  void on_controller_done(std::uint32_t e);
  void to_gateway(std::uint32_t e);
  void on_gateway_done(std::uint32_t e);
  void to_pool(std::uint32_t e);
  void start_service(std::size_t p, int r, std::uint32_t e);
  void on_service_done(std::size_t p, int r);
  void on_cold_start_done(std::size_t p, int r);
  void on_idle_expire(std::size_t p, int r, std::uint64_t token);
  void release_replica(std::size_t p, int r);
  void on_slot_end(int slot);

  void evaluate_autoscaler(std::size_t p, const LoadEstimate& load,
                           bool slot_end);
  LoadEstimate window_estimate(std::size_t p);
  LoadEstimate slot_estimate(std::size_t p) const;
  void scale_up(std::size_t p);
  void scale_down(std::size_t p);
  void remove_replica(std::size_t p, int r);
  std::optional<int> allocate_container(std::size_t server);
  void accrue_busy(std::size_t p, Replica& rep);
  void check_backlog(StageStats& stats, std::size_t length);

  double window() const {
    return cfg_.autoscaler.rate_window > 0.0 ? cfg_.autoscaler.rate_window
                                             : cfg_.grid.slot_length;
  }

  const ScenarioConfig& cfg_;
  std::uint64_t seed_;
  Rng gateway_rng_;
  double rate_bits_per_s_ = 1.0;

  std::priority_queue<CalendarEntry, std::vector<CalendarEntry>, Later>
      calendar_;
  std::uint64_t next_seq_ = 0;
  double now_ = 0.0;
  int current_slot_ = 1;
  bool finished_ = false;

  std::vector<Arrival> arrivals_;
  std::vector<EventRecord> events_;

  SingleServer controller_;
  SingleServer gateway_;
  std::vector<ReplicaPool> pools_;
  std::vector<PoolRuntime> runtime_;
  std::vector<std::vector<bool>> containers_;  // per server
  std::vector<ServerSlotUsage> server_usage_;

  std::vector<SlotRecord> slots_;
  double total_energy_ = 0.0;
};

void Engine::generate_arrivals() {
  const auto& fns = cfg_.functions;
  for (std::size_t f = 0; f < fns.size(); ++f) {
    const auto& fc = fns[f].workload;
    const auto packets =
        sample_arrivals(fc, cfg_.grid, seed_, cfg_.channel.packet_size);
    int pool = -1;
    if (auto routed = cfg_.route(fc.emitted_topic())) {
      pool = static_cast<int>(*routed);
    }
    for (const auto& pkt : packets) {
      arrivals_.push_back(
          {pkt.arrival_time, static_cast<int>(f), pool, pkt.size_bits});
    }
  }
  std::stable_sort(arrivals_.begin(), arrivals_.end(),
                   [](const Arrival& x, const Arrival& y) {
                     return std::tie(x.time, x.function) <
                            std::tie(y.time, y.function);
                   });
  events_.resize(arrivals_.size());
  for (std::size_t i = 0; i < arrivals_.size(); ++i) {
    events_[i].function_id = fns[static_cast<std::size_t>(
                                     arrivals_[i].function)].workload.id;
    events_[i].arrival = arrivals_[i].time;
  }
}

void Engine::check_backlog(StageStats& stats, std::size_t length) {
  stats.max_queue = std::max<std::uint64_t>(stats.max_queue, length);
  if (length > cfg_.simulation.backlog_cap) stats.unbounded = true;
}

void Engine::on_arrival(std::uint32_t e) {
  if (e + 1 < arrivals_.size()) {
    schedule(arrivals_[e + 1].time, Kind::kArrival, e + 1);
  }
  EventRecord& rec = events_[e];
  if (!cfg_.stages.controller) {
    rec.controller_start = rec.controller_done = now_;
    to_gateway(e);
    return;
  }
  controller_.stats.arrivals++;
  controller_.in_system.change(now_, +1);
  if (!controller_.busy) {
    controller_.busy = true;
    rec.controller_start = now_;
    schedule(now_ + arrivals_[e].size / rate_bits_per_s_,
             Kind::kControllerDone, e);
  } else {
    controller_.queue.push_back(e);
    check_backlog(controller_.stats, controller_.queue.size());
  }
}

void Engine::on_controller_done(std::uint32_t e) {
  EventRecord& rec = events_[e];
  rec.controller_done = now_;
  controller_.in_system.change(now_, -1);
  controller_.stats.departures++;
  controller_.wait_sum += rec.controller_start - rec.arrival;
  controller_.sojourn_sum += rec.controller_done - rec.arrival;
  if (!controller_.queue.empty()) {
    const std::uint32_t next = controller_.queue.front();
    controller_.queue.pop_front();
    events_[next].controller_start = now_;
    schedule(now_ + arrivals_[next].size / rate_bits_per_s_,
             Kind::kControllerDone, next);
  } else {
    controller_.busy = false;
  }
  to_gateway(e);
}

void Engine::to_gateway(std::uint32_t e) {
  EventRecord& rec = events_[e];
  if (!cfg_.stages.gateway) {
    rec.gateway_start = rec.gateway_done = rec.controller_done;
    to_pool(e);
    return;
  }
  gateway_.stats.arrivals++;
  gateway_.in_system.change(now_, +1);
  if (!gateway_.busy) {
    gateway_.busy = true;
    rec.gateway_start = now_;
    schedule(now_ + cfg_.gateway_service.sample(gateway_rng_),
             Kind::kGatewayDone, e);
  } else {
    gateway_.queue.push_back(e);
    check_backlog(gateway_.stats, gateway_.queue.size());
  }
}

void Engine::on_gateway_done(std::uint32_t e) {
  EventRecord& rec = events_[e];
  rec.gateway_done = now_;
  gateway_.in_system.change(now_, -1);
  gateway_.stats.departures++;
  gateway_.wait_sum += rec.gateway_start - rec.controller_done;
  gateway_.sojourn_sum += rec.gateway_done - rec.controller_done;
  if (!gateway_.queue.empty()) {
    const std::uint32_t next = gateway_.queue.front();
    gateway_.queue.pop_front();
    events_[next].gateway_start = now_;
    schedule(now_ + cfg_.gateway_service.sample(gateway_rng_),
             Kind::kGatewayDone, next);
  } else {
    gateway_.busy = false;
  }
  to_pool(e);
}

void Engine::to_pool(std::uint32_t e) {
  EventRecord& rec = events_[e];
  if (!cfg_.stages.functions) {
    rec.service_start = rec.completion = rec.gateway_done;
    rec.status = EventStatus::kCompleted;
    return;
  }
  const int routed = arrivals_[e].pool;
  if (routed < 0) {
    rec.status = EventStatus::kDropped;
    return;
  }
  const auto p = static_cast<std::size_t>(routed);
  rec.pool = routed;
  ReplicaPool& pool = pools_[p];
  PoolRuntime& rt = runtime_[p];
  rt.stats.arrivals++;
  rt.slot_arrivals++;
  rt.window_arrivals.push_back(now_);
  rt.in_system.change(now_, +1);

  std::optional<int> container;
  const auto server = pool.host_server();
  if (pool.replicas() == 0 && cfg_.autoscaler.on_demand_launch) {
    container = allocate_container(server);
    if (!container) rt.saturated = true;
  }
  const double cold_delay = cfg_.servers[server].cold_start_delay;
  const Assignment a = dispatch_event(pool, e, now_, container, cold_delay);
  if (a.kind == Assignment::Kind::kStarted) {
    start_service(p, a.replica, e);
  } else {
    check_backlog(rt.stats, pool.backlog().size());
  }
  if (a.kind == Assignment::Kind::kQueuedWithLaunch) {
    const Replica& rep = pool.replica(a.replica);
    rt.replica_time.change(now_, +1);
    rt.slot_cold++;
    rt.slot_max_replicas = std::max(rt.slot_max_replicas, pool.replicas());
    rt.max_replicas = std::max(rt.max_replicas, pool.replicas());
    server_usage_[server].cold_started.push_back(rep.container);
    schedule(rep.ready_at, Kind::kColdStartDone, static_cast<std::uint32_t>(p),
             static_cast<std::uint32_t>(a.replica));
  } else if (container) {
    containers_[server][static_cast<std::size_t>(*container)] = false;
  }

  const auto& policy = cfg_.autoscaler;
  if (policy.enabled && policy.evaluation == Evaluation::kPerEvent &&
      pool.replicas() > 0) {
    evaluate_autoscaler(p, window_estimate(p), false);
  }
}

void Engine::start_service(std::size_t p, int r, std::uint32_t e) {
  ReplicaPool& pool = pools_[p];
  PoolRuntime& rt = runtime_[p];
  pool.start_service(r, e, now_);
  EventRecord& rec = events_[e];
  rec.service_start = now_;
  const double wait = now_ - rec.gateway_done;
  rt.window_waits.emplace_back(now_, wait);
  rt.slot_wait_sum += wait;
  rt.slot_wait_count++;
  const double service = cfg_.functions[p].workload.service.sample(rt.rng);
  schedule(now_ + service, Kind::kServiceDone, static_cast<std::uint32_t>(p),
           static_cast<std::uint32_t>(r));
}

void Engine::accrue_busy(std::size_t p, Replica& rep) {
  const double busy = now_ - rep.busy_mark;
  rep.busy_mark = now_;
  runtime_[p].slot_busy += busy;
  server_usage_[pools_[p].host_server()].busy_time += busy;
}

void Engine::on_service_done(std::size_t p, int r) {
  ReplicaPool& pool = pools_[p];
  PoolRuntime& rt = runtime_[p];
  Replica& rep = pool.replica(r);
  accrue_busy(p, rep);
  const std::uint32_t e = rep.event;
  EventRecord& rec = events_[e];
  rec.completion = now_;
  rec.status = EventStatus::kCompleted;
  rt.in_system.change(now_, -1);
  rt.stats.departures++;
  rt.wait_sum += rec.wf();
  rt.sojourn_sum += rec.tf();
  if (rep.retiring) {
    remove_replica(p, r);
    return;
  }
  release_replica(p, r);
}

void Engine::on_cold_start_done(std::size_t p, int r) {
  Replica& rep = pools_[p].replica(r);
  if (!rep.alive) return;
  rep.state = ReplicaState::kIdle;
  release_replica(p, r);
}

// Hands a free replica the backlog head, or parks it idle.
void Engine::release_replica(std::size_t p, int r) {
  ReplicaPool& pool = pools_[p];
  if (!pool.backlog().empty()) {
    const std::uint32_t next = pool.backlog().front();
    pool.backlog().pop_front();
    start_service(p, r, next);
    return;
  }
  Replica& rep = pool.replica(r);
  rep.state = ReplicaState::kIdle;
  rep.idle_token++;
  if (cfg_.autoscaler.idle_timeout > 0.0) {
    schedule(now_ + cfg_.autoscaler.idle_timeout, Kind::kIdleExpire,
             static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(r),
             rep.idle_token);
  }
}

void Engine::on_idle_expire(std::size_t p, int r, std::uint64_t token) {
  ReplicaPool& pool = pools_[p];
  const Replica& rep = pool.replica(r);
  if (!rep.alive || rep.retiring || rep.state != ReplicaState::kIdle ||
      rep.idle_token != token) {
    return;
  }
  if (pool.replicas() <= cfg_.autoscaler.floor) return;
  runtime_[p].replica_time.change(now_, -1);
  remove_replica(p, r);
}

void Engine::remove_replica(std::size_t p, int r) {
  ReplicaPool& pool = pools_[p];
  const Replica& rep = pool.replica(r);
  containers_[pool.host_server()][static_cast<std::size_t>(rep.container)] =
      false;
  pool.remove(r);
}

std::optional<int> Engine::allocate_container(std::size_t server) {
  auto& slots = containers_[server];
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) {
      slots[i] = true;
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

LoadEstimate Engine::window_estimate(std::size_t p) {
  PoolRuntime& rt = runtime_[p];
  const double w = window();
  const double cutoff = now_ - w;
  while (!rt.window_arrivals.empty() && rt.window_arrivals.front() <= cutoff) {
    rt.window_arrivals.pop_front();
  }
  while (!rt.window_waits.empty() && rt.window_waits.front().first <= cutoff) {
    rt.window_waits.pop_front();
  }
  LoadEstimate load;
  load.arrival_rate = static_cast<double>(rt.window_arrivals.size()) / w;
  if (!rt.window_waits.empty()) {
    double sum = 0.0;
    for (const auto& [t, wait] : rt.window_waits) sum += wait;
    load.measured_wait = sum / static_cast<double>(rt.window_waits.size());
  }
  const auto& backlog = pools_[p].backlog();
  if (!backlog.empty()) {
    const double oldest = now_ - events_[backlog.front()].gateway_done;
    load.measured_wait = std::max(load.measured_wait, oldest);
  }
  return load;
}

LoadEstimate Engine::slot_estimate(std::size_t p) const {
  const PoolRuntime& rt = runtime_[p];
  LoadEstimate load;
  load.arrival_rate =
      static_cast<double>(rt.slot_arrivals) / cfg_.grid.slot_length;
  if (rt.slot_wait_count > 0) {
    load.measured_wait =
        rt.slot_wait_sum / static_cast<double>(rt.slot_wait_count);
  }
  const auto& backlog = pools_[p].backlog();
  if (!backlog.empty()) {
    const double oldest = now_ - events_[backlog.front()].gateway_done;
    load.measured_wait = std::max(load.measured_wait, oldest);
  }
  return load;
}

void Engine::evaluate_autoscaler(std::size_t p, const LoadEstimate& load,
                                 bool slot_end) {
  ReplicaPool& pool = pools_[p];
  PoolRuntime& rt = runtime_[p];
  const auto& policy = cfg_.autoscaler;
  const auto& service = cfg_.functions[p].workload.service;
  if (policy.scale_down_enabled) {
    rt.below_all_slot =
        rt.below_all_slot && scale_down_condition(policy, service,
                                                  pool.replicas(), load,
                                                  cfg_.wait_formula);
  }
  PoolStatus status;
  status.replicas = pool.replicas();
  status.n_max = cfg_.functions[p].n_max;
  status.last_scale_up_slot = rt.last_scale_up_slot;
  status.below_threshold_all_slot = rt.below_all_slot;
  const ScalingDecision d =
      autoscale_step(status, policy, service, load, current_slot_, slot_end,
                     cfg_.wait_formula);
  if (d.saturated) rt.saturated = true;
  if (d.action == ScalingAction::kScaleUp) scale_up(p);
  if (d.action == ScalingAction::kScaleDown) scale_down(p);
}

void Engine::scale_up(std::size_t p) {
  ReplicaPool& pool = pools_[p];
  PoolRuntime& rt = runtime_[p];
  const auto server = pool.host_server();
  const auto container = allocate_container(server);
  if (!container) {
    rt.saturated = true;
    return;
  }
  const int r = pool.launch(*container, now_,
                            cfg_.servers[server].cold_start_delay);
  rt.replica_time.change(now_, +1);
  rt.slot_cold++;
  rt.last_scale_up_slot = current_slot_;
  rt.slot_max_replicas = std::max(rt.slot_max_replicas, pool.replicas());
  rt.max_replicas = std::max(rt.max_replicas, pool.replicas());
  server_usage_[server].cold_started.push_back(*container);
  schedule(pool.replica(r).ready_at, Kind::kColdStartDone,
           static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(r));
}

void Engine::scale_down(std::size_t p) {
  ReplicaPool& pool = pools_[p];
  PoolRuntime& rt = runtime_[p];
  if (auto idle = pool.last_idle()) {
    rt.replica_time.change(now_, -1);
    remove_replica(p, *idle);
  } else if (auto busy = pool.last_busy()) {
    rt.replica_time.change(now_, -1);
    pool.replica(*busy).retiring = true;
  }
}

void Engine::on_slot_end(int slot) {
  const double slot_length = cfg_.grid.slot_length;
  SlotRecord record;
  record.slot = slot;
  for (std::size_t p = 0; p < pools_.size(); ++p) {
    ReplicaPool& pool = pools_[p];
    PoolRuntime& rt = runtime_[p];
    for (std::size_t r = 0; r < pool.replica_list().size(); ++r) {
      Replica& rep = pool.replica(static_cast<int>(r));
      if (rep.alive && rep.state == ReplicaState::kBusy) accrue_busy(p, rep);
    }
    rt.replica_time.close(now_);
    const double replica_time = rt.replica_time.area;
    rt.total_busy += rt.slot_busy;
    rt.total_replica_time += replica_time;
    record.replicas_end.push_back(pool.replicas());
    record.replicas_max.push_back(
        std::max(rt.slot_max_replicas, pool.replicas()));
    record.cold_starts.push_back(rt.slot_cold);
    record.utilization.push_back(
        replica_time > 0.0 ? std::min(1.0, rt.slot_busy / replica_time) : 0.0);
  }
  record.power =
      account_power(server_usage_, slot, cfg_.servers, slot_length);
  for (const auto& bd : record.power) total_energy_ += bd.energy;

  std::vector<LoadEstimate> loads;
  for (std::size_t p = 0; p < pools_.size(); ++p) {
    loads.push_back(slot_estimate(p));
  }
  for (std::size_t p = 0; p < pools_.size(); ++p) {
    PoolRuntime& rt = runtime_[p];
    rt.replica_time.area = 0.0;
    rt.slot_busy = 0.0;
    rt.slot_cold = 0;
    rt.slot_arrivals = 0;
    rt.slot_wait_sum = 0.0;
    rt.slot_wait_count = 0;
    rt.slot_max_replicas = pools_[p].replicas();
  }
  for (auto& usage : server_usage_) usage = ServerSlotUsage{};
  slots_.push_back(std::move(record));

  if (slot >= cfg_.grid.slot_count) {
    finished_ = true;
    return;
  }
  current_slot_ = slot + 1;
  const auto& policy = cfg_.autoscaler;
  if (policy.enabled) {
    for (std::size_t p = 0; p < pools_.size(); ++p) {
      if (pools_[p].replicas() == 0) continue;
      const LoadEstimate load = policy.evaluation == Evaluation::kPerSlot
                                    ? loads[p]
                                    : window_estimate(p);
      evaluate_autoscaler(p, load, true);
    }
  }
  for (auto& rt : runtime_) rt.below_all_slot = true;
  schedule(cfg_.grid.slot_end(slot + 1), Kind::kSlotEnd,
           static_cast<std::uint32_t>(slot + 1));
}

std::vector<double> sorted_copy(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

double nearest_rank(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(sorted.size())));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

SimReport Engine::run(const SimOptions& options) {
  if (cfg_.stages.controller) {
    rate_bits_per_s_ = wireless_rate(cfg_.channel);
  }
  generate_arrivals();

  containers_.assign(cfg_.servers.size(), {});
  for (std::size_t s = 0; s < cfg_.servers.size(); ++s) {
    containers_[s].assign(
        static_cast<std::size_t>(cfg_.servers[s].max_containers), false);
  }
  server_usage_.assign(cfg_.servers.size(), ServerSlotUsage{});
  for (std::size_t f = 0; f < cfg_.functions.size(); ++f) {
    const auto& fs = cfg_.functions[f];
    const std::size_t server = cfg_.host_server(f);
    pools_.emplace_back(fs.workload.id, server);
    runtime_.emplace_back(Rng::Substream(
        seed_, StreamTag::kPoolService,
        static_cast<std::uint64_t>(fs.workload.id)));
    for (int i = 0; i < fs.initial_replicas; ++i) {
      const auto container = allocate_container(server);
      if (!container) throw OverCapacityError(i + 1, cfg_.servers[server].max_containers);
      pools_.back().add_warm(*container, 0.0);
    }
    runtime_.back().replica_time.change(0.0, fs.initial_replicas);
    runtime_.back().slot_max_replicas = fs.initial_replicas;
    runtime_.back().max_replicas = fs.initial_replicas;
  }

  if (!arrivals_.empty()) schedule(arrivals_.front().time, Kind::kArrival, 0);
  schedule(cfg_.grid.slot_end(1), Kind::kSlotEnd, 1);

  while (!calendar_.empty() && !finished_) {
    const CalendarEntry entry = calendar_.top();
    calendar_.pop();
    now_ = entry.time;
    switch (entry.kind) {
      case Kind::kArrival:
        on_arrival(entry.a);
        break;
      case Kind::kControllerDone:
        on_controller_done(entry.a);
        break;
      case Kind::kGatewayDone:
        on_gateway_done(entry.a);
        break;
      case Kind::kServiceDone:
        on_service_done(entry.a, static_cast<int>(entry.b));
        break;
      case Kind::kColdStartDone:
        on_cold_start_done(entry.a, static_cast<int>(entry.b));
        break;
      case Kind::kIdleExpire:
        on_idle_expire(entry.a, static_cast<int>(entry.b), entry.token);
        break;
      case Kind::kSlotEnd:
        on_slot_end(static_cast<int>(entry.a));
        break;
    }
  }

  const double horizon = cfg_.grid.horizon();
  SimReport report;
  report.seed = seed_;
  report.digest = config_digest(cfg_);
  report.wait_formula = cfg_.wait_formula;
  report.horizon = horizon;
  report.total_energy = total_energy_;
  report.packet_size_varies = cfg_.packet_size_varies();

  auto finish_stage = [&](SingleServer& st) {
    st.in_system.close(horizon);
    StageStats s = st.stats;
    if (s.departures > 0) {
      s.mean_wait = st.wait_sum / static_cast<double>(s.departures);
      s.mean_sojourn = st.sojourn_sum / static_cast<double>(s.departures);
    }
    s.mean_in_system = st.in_system.area / horizon;
    return s;
  };
  report.controller = finish_stage(controller_);
  report.gateway = finish_stage(gateway_);

  const std::size_t nf = cfg_.functions.size();
  report.functions.resize(nf);
  std::vector<std::vector<double>> totals(nf);
  std::vector<double> sum_ts(nf, 0.0), sum_tg(nf, 0.0), sum_wf(nf, 0.0),
      sum_tf(nf, 0.0), sum_total(nf, 0.0);
  for (std::size_t i = 0; i < arrivals_.size(); ++i) {
    const auto f = static_cast<std::size_t>(arrivals_[i].function);
    const EventRecord& rec = events_[i];
    FunctionStats& fs = report.functions[f];
    fs.generated++;
    if (rec.status == EventStatus::kDropped) {
      fs.dropped++;
    } else if (rec.status == EventStatus::kInFlight) {
      fs.in_flight++;
    } else {
      fs.completed++;
      sum_ts[f] += rec.ts();
      sum_tg[f] += rec.tg();
      sum_wf[f] += rec.wf();
      sum_tf[f] += rec.tf();
      sum_total[f] += rec.total();
      totals[f].push_back(rec.total());
    }
  }
  for (std::size_t f = 0; f < nf; ++f) {
    FunctionStats& fs = report.functions[f];
    const PoolRuntime& rt = runtime_[f];
    fs.id = cfg_.functions[f].workload.id;
    if (fs.completed > 0) {
      const auto n = static_cast<double>(fs.completed);
      fs.mean_ts = sum_ts[f] / n;
      fs.mean_tg = sum_tg[f] / n;
      fs.mean_wf = sum_wf[f] / n;
      fs.mean_tf = sum_tf[f] / n;
      fs.mean_total = sum_total[f] / n;
      const auto sorted = sorted_copy(std::move(totals[f]));
      fs.p50_total = nearest_rank(sorted, 0.50);
      fs.p95_total = nearest_rank(sorted, 0.95);
      fs.p99_total = nearest_rank(sorted, 0.99);
    }
    fs.utilization = rt.total_replica_time > 0.0
                         ? std::min(1.0, rt.total_busy / rt.total_replica_time)
                         : 0.0;
    fs.saturated = rt.saturated;
    fs.max_replicas = rt.max_replicas;
    report.generated += fs.generated;
    report.completed += fs.completed;
    report.in_flight += fs.in_flight;
    report.dropped += fs.dropped;
  }

  for (std::size_t p = 0; p < nf; ++p) {
    PoolRuntime& rt = runtime_[p];
    rt.in_system.close(horizon);
    StageStats s = rt.stats;
    if (s.departures > 0) {
      s.mean_wait = rt.wait_sum / static_cast<double>(s.departures);
      s.mean_sojourn = rt.sojourn_sum / static_cast<double>(s.departures);
    }
    s.mean_in_system = rt.in_system.area / horizon;
    report.pools.push_back(s);
  }
  report.unbounded_growth =
      report.controller.unbounded || report.gateway.unbounded ||
      std::any_of(report.pools.begin(), report.pools.end(),
                  [](const StageStats& s) { return s.unbounded; });
  report.slots = std::move(slots_);
  if (options.keep_events) report.events = std::move(events_);
  return report;
}

}  // namespace

SimReport run_simulation(const ScenarioConfig& cfg, std::uint64_t seed,
                         const SimOptions& options) {
  if (auto violations = validate(cfg); !violations.empty()) {
    throw ConfigError(std::move(violations));
  }
  Engine engine(cfg, seed);
  return engine.run(options);
}

}  // namespace faaspipe
