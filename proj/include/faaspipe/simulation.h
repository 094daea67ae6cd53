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

#ifndef FAASPIPE_SIMULATION_H_
#define FAASPIPE_SIMULATION_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "faaspipe/power.h"
#include "faaspipe/scenario.h"

namespace faaspipe {

enum class ReplicaState { kColdStarting, kIdle, kBusy };

struct Replica {
  ReplicaState state = ReplicaState::kIdle;
  double ready_at = 0.0;  // end of the cold start
  int container = -1;     // container slot on the host server
  bool alive = true;
  bool retiring = false;  // removed once its current service ends
  std::uint64_t idle_token = 0;
  std::uint32_t event = 0;  // event in service while busy
  double busy_mark = 0.0;   // start of not-yet-accounted busy time

  double cold_remaining(double now) const {
    return state == ReplicaState::kColdStarting ? ready_at - now : 0.0;
  }
};

// Replicas of one function plus their shared FCFS backlog. Replica indices
// are stable; removed replicas stay in the list with alive = false.
class ReplicaPool {
 public:
  ReplicaPool(int function_id, std::size_t host_server)
      : function_id_(function_id), host_server_(host_server) {}

  int function_id() const { return function_id_; }
  std::size_t host_server() const { return host_server_; }

  // n_m: live replicas not marked for retirement.
  int replicas() const;
  int count(ReplicaState state) const;
  const std::vector<Replica>& replica_list() const { return replicas_; }
  Replica& replica(int r) { return replicas_[static_cast<std::size_t>(r)]; }
  std::deque<std::uint32_t>& backlog() { return backlog_; }
  const std::deque<std::uint32_t>& backlog() const { return backlog_; }

  int add_warm(int container, double now);
  int launch(int container, double now, double cold_delay);
  std::optional<int> first_idle() const;
  // Last idle replica, preferred when scaling down.
  std::optional<int> last_idle() const;
  std::optional<int> last_busy() const;
  void start_service(int r, std::uint32_t event, double now);
  void remove(int r);

 private:
  int function_id_;
  std::size_t host_server_;
  std::vector<Replica> replicas_;
  std::deque<std::uint32_t> backlog_;
};

struct Assignment {
  enum class Kind { kStarted, kQueued, kQueuedWithLaunch };
  Kind kind = Kind::kQueued;
  int replica = -1;  // serving replica, or the one launched
};

// Sends an event to an idle warm replica (lowest index) or appends it to the
// backlog. With no replica at all and a free container, launches one cold.
Assignment dispatch_event(ReplicaPool& pool, std::uint32_t event, double now,
                          std::optional<int> launch_container,
                          double cold_delay);

// What one server did during a slot.
struct ServerSlotUsage {
  double busy_time = 0.0;               // summed over hosted replicas
  std::vector<int> cold_started;        // containers that began a cold start
};

// U_s = busy_time / (core_count * slot_length), clamped to [0, 1]; x_i set for
// each container that began a cold start. Throws OverCapacityError when a
// container index or the number of cold starts exceeds max_containers.
std::vector<SlotPowerBreakdown> account_power(
    const std::vector<ServerSlotUsage>& usage, int slot,
    const std::vector<ServerPowerParams>& servers, double slot_length);

enum class EventStatus : std::uint8_t { kCompleted, kInFlight, kDropped };

// Per-event timestamps. Disabled stages take zero time.
struct EventRecord {
  int function_id = 0;
  int pool = -1;  // serving function index; -1 when dropped or bypassed
  EventStatus status = EventStatus::kInFlight;
  double arrival = 0.0;
  double controller_start = 0.0;
  double controller_done = 0.0;
  double gateway_start = 0.0;
  double gateway_done = 0.0;
  double service_start = 0.0;
  double completion = 0.0;

  double ts() const { return controller_done - arrival; }
  double wg() const { return gateway_start - controller_done; }
  double tg() const { return gateway_done - controller_done; }
  double wf() const { return service_start - gateway_done; }
  double tf() const { return completion - gateway_done; }
  double total() const { return ts() + tg() + tf(); }
};

struct FunctionStats {
  int id = 0;
  std::uint64_t generated = 0;
  std::uint64_t completed = 0;
  std::uint64_t in_flight = 0;
  std::uint64_t dropped = 0;
  // Means over completed events; mean_total == mean_ts + mean_tg + mean_tf
  // up to summation rounding.
  double mean_ts = 0.0;
  double mean_tg = 0.0;
  double mean_wf = 0.0;
  double mean_tf = 0.0;
  double mean_total = 0.0;
  double p50_total = 0.0;
  double p95_total = 0.0;
  double p99_total = 0.0;
  double utilization = 0.0;  // busy time / replica time over the horizon
  bool saturated = false;    // autoscaler hit n_max or the container limit
  int max_replicas = 0;
};

struct StageStats {
  std::uint64_t arrivals = 0;
  std::uint64_t departures = 0;
  double mean_wait = 0.0;     // over departures
  double mean_sojourn = 0.0;  // over departures
  double mean_in_system = 0.0;  // time average over the horizon
  std::uint64_t max_queue = 0;
  bool unbounded = false;  // queue exceeded the backlog cap
};

struct SlotRecord {
  int slot = 0;
  std::vector<int> replicas_end;  // per function
  std::vector<int> replicas_max;
  std::vector<int> cold_starts;
  std::vector<double> utilization;  // per function, busy / replica time
  std::vector<SlotPowerBreakdown> power;  // per server
};

struct SimOptions {
  bool keep_events = false;
};

struct SimReport {
  std::uint64_t seed = 0;
  std::string digest;
  WaitFormula wait_formula = WaitFormula::kGeneral;
  double horizon = 0.0;
  std::uint64_t generated = 0;
  std::uint64_t completed = 0;
  std::uint64_t in_flight = 0;
  std::uint64_t dropped = 0;
  std::vector<FunctionStats> functions;
  StageStats controller;
  StageStats gateway;
  std::vector<StageStats> pools;
  std::vector<SlotRecord> slots;
  double total_energy = 0.0;
  bool unbounded_growth = false;
  bool packet_size_varies = false;
  std::vector<EventRecord> events;  // only with SimOptions::keep_events
};

// Throws ConfigError when the scenario is invalid.
SimReport run_simulation(const ScenarioConfig& cfg, std::uint64_t seed,
                         const SimOptions& options = {});

}  // namespace faaspipe

#endif  // FAASPIPE_SIMULATION_H_
