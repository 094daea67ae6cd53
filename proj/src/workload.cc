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

#include "faaspipe/workload.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace faaspipe {

void TimeSlotGrid::check_slot(int slot) const {
  if (slot < 1 || slot > slot_count) {
    throw std::out_of_range("slot " + std::to_string(slot) +
                            " outside 1.." + std::to_string(slot_count));
  }
}

int TimeSlotGrid::slot_of(double t) const {
  if (t <= 0.0) return 1;
  const auto slot = static_cast<long long>(std::floor(t / slot_length)) + 1;
  if (slot > slot_count) return slot_count;
  return static_cast<int>(slot);
}

const char* to_string(ServiceKind kind) {
  switch (kind) {
    case ServiceKind::kDeterministic:
      return "deterministic";
    case ServiceKind::kExponential:
      return "exponential";
    case ServiceKind::kGeneralTwoMoment:
      return "general";
  }
  return "?";
}

std::optional<ServiceKind> parse_service_kind(std::string_view name) {
  if (name == "deterministic") return ServiceKind::kDeterministic;
  if (name == "exponential") return ServiceKind::kExponential;
  if (name == "general") return ServiceKind::kGeneralTwoMoment;
  return std::nullopt;
}

ServiceDistribution::ServiceDistribution(ServiceKind kind, double mean,
                                         double second_moment)
    : kind_(kind), mean_(mean), second_moment_(second_moment) {
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("service mean must be positive and finite");
  }
  // Slack of a few ulps so general(b, b*b) is admissible.
  if (!std::isfinite(second_moment) ||
      second_moment < mean * mean * (1.0 - 1e-12)) {
    throw std::invalid_argument(
        "service second moment must be finite and >= mean^2");
  }
  if (kind != ServiceKind::kGeneralTwoMoment) return;

  const double c2 = scv();
  if (c2 < 1.0) {
    const double c = std::sqrt(c2);
    shift_ = mean * (1.0 - c);
    mean1_ = mean * c;
  } else {
    p1_ = 0.5 * (1.0 + std::sqrt((c2 - 1.0) / (c2 + 1.0)));
    mean1_ = mean / (2.0 * p1_);
    mean2_ = mean / (2.0 * (1.0 - p1_));
  }
}

ServiceDistribution ServiceDistribution::deterministic(double mean) {
  return {ServiceKind::kDeterministic, mean, mean * mean};
}

ServiceDistribution ServiceDistribution::exponential(double mean) {
  return {ServiceKind::kExponential, mean, 2.0 * mean * mean};
}

ServiceDistribution ServiceDistribution::general(double mean,
                                                 double second_moment) {
  return {ServiceKind::kGeneralTwoMoment, mean, second_moment};
}

double ServiceDistribution::scv() const {
  return std::max(0.0, second_moment_ / (mean_ * mean_) - 1.0);
}

double ServiceDistribution::sample(Rng& rng) const {
  switch (kind_) {
    case ServiceKind::kDeterministic:
      return mean_;
    case ServiceKind::kExponential:
      return rng.Exponential(mean_);
    case ServiceKind::kGeneralTwoMoment:
      if (mean2_ == 0.0) {
        return mean1_ == 0.0 ? shift_ : shift_ + rng.Exponential(mean1_);
      }
      return rng.UniformOpen() < p1_ ? rng.Exponential(mean1_)
                                     : rng.Exponential(mean2_);
  }
  return mean_;
}

const std::string& FunctionClass::emitted_topic() const {
  static const std::string kEmpty;
  if (!emit_topic.empty()) return emit_topic;
  return topics.empty() ? kEmpty : topics.front();
}

double FunctionClass::rate(const TimeSlotGrid& grid, int slot) const {
  grid.check_slot(slot);
  if (static_cast<int>(lambda_per_slot.size()) != grid.slot_count) {
    throw std::invalid_argument("function " + std::to_string(id) +
                                ": rate list length != slot count");
  }
  return lambda_per_slot[slot - 1];
}

std::vector<EventPacket> sample_arrivals(const FunctionClass& fc,
                                         const TimeSlotGrid& grid,
                                         std::uint64_t seed,
                                         double packet_size_bits) {
  std::vector<EventPacket> events;
  const std::string& topic = fc.emitted_topic();
  const double size = fc.packet_size.value_or(packet_size_bits);
  for (int slot = 1; slot <= grid.slot_count; ++slot) {
    const double rate = fc.rate(grid, slot);
    if (rate <= 0.0) continue;
    Rng rng = Rng::Substream(seed, StreamTag::kArrivals,
                             static_cast<std::uint64_t>(fc.id),
                             static_cast<std::uint64_t>(slot));
    const double end = grid.slot_end(slot);
    double t = grid.slot_start(slot);
    const double mean_gap = 1.0 / rate;
    while (true) {
      double next = t + rng.Exponential(mean_gap);
      if (next <= t) next = std::nextafter(t, end);
      if (next >= end) break;
      t = next;
      events.push_back({t, fc.id, topic, size});
    }
  }
  return events;
}

double sample_service(const ServiceDistribution& sd, Rng& rng) {
  return sd.sample(rng);
}

double aggregate_rate(std::span<const FunctionClass> classes,
                      const TimeSlotGrid& grid, int slot) {
  grid.check_slot(slot);
  double total = 0.0;
  for (const auto& fc : classes) total += fc.rate(grid, slot);
  return total;
}

}  // namespace faaspipe
