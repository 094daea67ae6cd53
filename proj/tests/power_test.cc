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


#include <gtest/gtest.h>

#include <stdexcept>
#include <vector>

#include "faaspipe/errors.h"
#include "faaspipe/power.h"

namespace faaspipe {
namespace {

ServerPowerParams reference() {
  ServerPowerParams p;
  p.idle_power = 100.0;
  p.gamma1 = 50.0;
  p.gamma2 = 120.0;
  p.eta = 1e-26;
  p.cpu_freq = 1.5e9;
  p.cold_start_delay = 0.5;
  p.max_containers = 4;
  return p;
}

TEST(DynamicPower, Examples) {
  const auto p = reference();
  EXPECT_EQ(dynamic_power(0.0, p), 0.0);
  EXPECT_DOUBLE_EQ(dynamic_power(0.5, p), 55.0);
  EXPECT_DOUBLE_EQ(dynamic_power(1.0, p), 170.0);
  EXPECT_THROW(dynamic_power(-0.1, p), std::invalid_argument);
  EXPECT_THROW(dynamic_power(1.1, p), std::invalid_argument);
}

TEST(WarmPower, Examples) {
  const auto p = reference();
  EXPECT_EQ(warm_power(0.0, p), 100.0);
  EXPECT_EQ(warm_power(0.5, p), 155.0);
  double prev = warm_power(0.0, p);
  for (int i = 1; i <= 100; ++i) {
    const double w = warm_power(i / 100.0, p);
    EXPECT_GT(w, prev);
    prev = w;
  }
}

TEST(ColdStartPower, Examples) {
  auto p = reference();
  EXPECT_EQ(cold_start_power(0, p, 10.0).literal_power, 0.0);
  EXPECT_EQ(cold_start_power(2, p, 10.0).literal_power, 33.75);
  const auto two = cold_start_power(2, p, 10.0);
  EXPECT_EQ(two.energy, 33.75);
  EXPECT_EQ(two.slot_average_power, 3.375);
  EXPECT_THROW(cold_start_power(5, p, 10.0), OverCapacityError);

  ServerPowerParams unit;
  unit.eta = 1.0;
  unit.cpu_freq = 1.0;
  unit.cold_start_delay = 1.0;
  EXPECT_EQ(cold_start_power(1, unit, 1.0).literal_power, 1.0);
}

TEST(TotalServerPower, Examples) {
  const auto p = reference();
  const auto idle = total_server_power(0.0, {false, false, false, false}, p,
                                       10.0, 3);
  EXPECT_EQ(idle.total_power, 100.0);
  EXPECT_EQ(idle.cold_power, 0.0);
  EXPECT_EQ(idle.slot, 3);
  EXPECT_EQ(idle.energy, 1000.0);

  const auto one = total_server_power(0.5, {false, true, false, false}, p,
                                      10.0);
  EXPECT_EQ(one.warm_power, 155.0);
  EXPECT_EQ(one.cold_power, 16.875);
  EXPECT_EQ(one.total_power, 171.875);
  EXPECT_EQ(one.cold_count, 1);

  const auto two = total_server_power(0.5, {true, true, false, false}, p,
                                      10.0);
  EXPECT_EQ(two.cold_power, 2.0 * one.cold_power);
  EXPECT_THROW(total_server_power(0.5, {true}, p, 10.0), std::invalid_argument);
}

TEST(TotalServerPower, WarmOnlyIsExact) {
  const auto p = reference();
  const std::vector<bool> none(4, false);
  for (int i = 0; i <= 1000; ++i) {
    const double u = i / 1000.0;
    const auto bd = total_server_power(u, none, p, 1.0);
    EXPECT_EQ(bd.total_power, p.idle_power + p.gamma1 * u + p.gamma2 * u * u);
    EXPECT_EQ(bd.total_power, bd.warm_power);
  }
}

// The count form and the per-container sum agree exactly.
TEST(TotalServerPower, CountFormMatchesFlagSum) {
  auto p = reference();
  p.max_containers = 10;
  for (int c = 0; c <= 10; ++c) {
    std::vector<bool> flags(10, false);
    for (int i = 0; i < c; ++i) flags[static_cast<std::size_t>(9 - i)] = true;
    const auto bd = total_server_power(0.3, flags, p, 5.0);
    EXPECT_EQ(bd.cold_count, c);
    EXPECT_EQ(bd.cold_power, cold_start_power(c, p, 5.0).literal_power);
    EXPECT_EQ(bd.total_power, bd.warm_power + bd.cold_power);
    EXPECT_DOUBLE_EQ(bd.warm_power, bd.idle_power + bd.dynamic_power);
  }
}

TEST(TotalServerPower, NonDecreasingInEveryParameter) {
  auto p = reference();
  p.max_containers = 10;
  auto flags_for = [](int c) {
    std::vector<bool> f(10, false);
    for (int i = 0; i < c; ++i) f[static_cast<std::size_t>(i)] = true;
    return f;
  };
  for (int c = 0; c <= 10; ++c) {
    double prev = -1.0;
    for (double d = 0.15; d <= 0.85 + 1e-9; d += 0.1) {
      p.cold_start_delay = d;
      const double v = total_server_power(0.4, flags_for(c), p, 1.0).total_power;
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
  p.cold_start_delay = 0.5;
  double prev = -1.0;
  for (double f = 1e9; f <= 2e9; f += 1e8) {
    p.cpu_freq = f;
    const double v = total_server_power(0.4, flags_for(3), p, 1.0).total_power;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(CheckParams, RejectsInvalid) {
  auto p = reference();
  EXPECT_NO_THROW(check_params(p));
  p.idle_power = 0.0;
  EXPECT_THROW(check_params(p), std::invalid_argument);
  p = reference();
  p.max_containers = 0;
  EXPECT_THROW(check_params(p), std::invalid_argument);
  p = reference();
  p.gamma2 = -1.0;
  EXPECT_THROW(check_params(p), std::invalid_argument);
}

}  // namespace
}  // namespace faaspipe
