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

#ifndef FAASPIPE_WORKLOAD_H_
#define FAASPIPE_WORKLOAD_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "faaspipe/rng.h"

namespace faaspipe {

// Quasi-static time slots: rates are constant inside a slot and may change
// between slots. Slot indices are 1-based.
struct TimeSlotGrid {
  double slot_length = 1.0;
  int slot_count = 1;

  double horizon() const { return slot_length * slot_count; }
  double slot_start(int slot) const { return slot_length * (slot - 1); }
  double slot_end(int slot) const { return slot_length * slot; }

  // Throws std::out_of_range for slots outside 1..slot_count.
  void check_slot(int slot) const;

  // Slot containing time t, clamped to the grid.
  int slot_of(double t) const;

  bool operator==(const TimeSlotGrid&) const = default;
};

enum class ServiceKind { kDeterministic, kExponential, kGeneralTwoMoment };

const char* to_string(ServiceKind kind);
std::optional<ServiceKind> parse_service_kind(std::string_view name);

// A service-time law described by its first two moments, with a sampler that
// matches both.
//
// GeneralTwoMoment picks its sampler from the squared coefficient of
// variation c2 = b2/b^2 - 1:
//   c2 == 0     point mass at b
//   0 < c2 < 1  shifted exponential: b(1 - c) + Exp(mean c*b)
//   c2 >= 1     two-phase hyperexponential with balanced means
class ServiceDistribution {
 public:
  // Throws std::invalid_argument when the moments are inadmissible.
  static ServiceDistribution deterministic(double mean);
  static ServiceDistribution exponential(double mean);
  static ServiceDistribution general(double mean, double second_moment);

  ServiceKind kind() const { return kind_; }
  double mean() const { return mean_; }
  double second_moment() const { return second_moment_; }
  double rate() const { return 1.0 / mean_; }
  double scv() const;

  double sample(Rng& rng) const;

  bool operator==(const ServiceDistribution&) const = default;

 private:
  ServiceDistribution(ServiceKind kind, double mean, double second_moment);

  ServiceKind kind_ = ServiceKind::kDeterministic;
  double mean_ = 1.0;
  double second_moment_ = 1.0;
  // Sampler parameters for the general kind.
  double shift_ = 0.0;
  double p1_ = 1.0;
  double mean1_ = 0.0;
  double mean2_ = 0.0;
};

struct FunctionClass {
  int id = 1;
  std::vector<double> lambda_per_slot;  // events/second, one per slot
  ServiceDistribution service = ServiceDistribution::exponential(0.2);
  std::vector<std::string> topics;
  // Topic stamped on generated events; empty means topics.front().
  std::string emit_topic;
  // Per-function packet size in bits; unset means the channel's size.
  std::optional<double> packet_size;

  const std::string& emitted_topic() const;

  // Throws std::out_of_range for slots outside the grid.
  double rate(const TimeSlotGrid& grid, int slot) const;

  bool operator==(const FunctionClass&) const = default;
};

struct EventPacket {
  double arrival_time = 0.0;
  int function_id = 0;
  std::string topic;
  double size_bits = 0.0;
};

// Poisson arrivals for one function class. Each slot draws from its own
// substream keyed by (seed, function id, slot), so editing one slot's rate
// leaves the others' draws untouched.
std::vector<EventPacket> sample_arrivals(const FunctionClass& fc,
                                         const TimeSlotGrid& grid,
                                         std::uint64_t seed,
                                         double packet_size_bits);

double sample_service(const ServiceDistribution& sd, Rng& rng);

// Total arrival rate over all classes in the slot.
double aggregate_rate(std::span<const FunctionClass> classes,
                      const TimeSlotGrid& grid, int slot);

}  // namespace faaspipe

#endif  // FAASPIPE_WORKLOAD_H_
