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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "faaspipe/errors.h"
#include "faaspipe/scenario.h"
#include "faaspipe/toml_lite.h"

#ifndef FAASPIPE_SCENARIO_DIR
#error "FAASPIPE_SCENARIO_DIR must name the shipped scenarios directory"
#endif

namespace faaspipe {
namespace {

namespace tl = toml_lite;

const std::filesystem::path kScenarios = FAASPIPE_SCENARIO_DIR;

bool has_path(const ConfigError& e, const std::string& path) {
  return std::any_of(e.violations().begin(), e.violations().end(),
                     [&](const Violation& v) { return v.path == path; });
}

ConfigError error_of(std::string_view text) {
  try {
    parse_scenario_text(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return ConfigError({});
}

constexpr const char* kMinimal = R"(
name = "minimal"
[grid]
slot_length = 10.0
slot_count = 2
[channel]
bandwidth = 1e6
channel_gain = 1.0
tx_power = 1.0
noise_power = 1.0
packet_size = 1000.0
[gateway]
service = "exponential"
mean = 0.01
[[function]]
id = 1
topics = ["a"]
lambda = [2.0, 3.0]
service = "exponential"
mean = 0.2
[[server]]
id = 1
idle_power = 100.0
gamma1 = 50.0
gamma2 = 120.0
cpu_freq = 1e9
cold_start_delay = 0.5
)";

TEST(TomlLite, ParsesSubset) {
  const auto t = tl::parse(R"(
# comment
a = 1
b = -2.5e3   # trailing
c = "x\"y"
d = 'lit\n'
e = true
f = [1, 2,
     3]
[t.sub]
g = 4
[[arr]]
h = 1
[[arr]]
h = 2
)");
  EXPECT_EQ(std::get<std::int64_t>(t.values.at("a").data), 1);
  EXPECT_EQ(t.values.at("b").as_double(), -2500.0);
  EXPECT_EQ(std::get<std::string>(t.values.at("c").data), "x\"y");
  EXPECT_EQ(std::get<std::string>(t.values.at("d").data), "lit\\n");
  EXPECT_TRUE(std::get<bool>(t.values.at("e").data));
  EXPECT_EQ(std::get<tl::Array>(t.values.at("f").data).size(), 3u);
  EXPECT_EQ(std::get<std::int64_t>(
                t.tables.at("t").tables.at("sub").values.at("g").data),
            4);
  EXPECT_EQ(t.table_arrays.at("arr").size(), 2u);
}

TEST(TomlLite, ReportsEverySyntaxError) {
  try {
    tl::parse("a = \nb = 1\nb = 2\nc = {x = 1}\n[t]\n[t]\n");
    FAIL();
  } catch (const tl::ParseError& e) {
    std::vector<int> lines;
    for (const auto& s : e.errors()) lines.push_back(s.line);
    EXPECT_EQ(lines, (std::vector<int>{1, 3, 4, 6}));
  }
}

TEST(TomlLite, FormatDoubleRoundTrips) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = d(gen);
    EXPECT_EQ(std::stod(tl::format_double(x)), x);
  }
  EXPECT_EQ(tl::format_double(3.0), "3.0");
  EXPECT_EQ(tl::format_double(1e-26), "1e-26");
}

TEST(ParseScenario, ShippedScenariosParse) {
  for (const char* name : {"paper_grid.toml", "mm1_oracle.toml",
                           "mdn_oracle.toml", "md1_oracle.toml",
                           "coldstart_sweep.toml"}) {
    SCOPED_TRACE(name);
    EXPECT_NO_THROW(parse_scenario(kScenarios / name));
  }
}

TEST(ParseScenario, ReferenceGridRanges) {
  const auto cfg = parse_scenario(kScenarios / "paper_grid.toml");
  const auto* lambda = cfg.find_sweep(SweepAxis::kLambda);
  ASSERT_NE(lambda, nullptr);
  EXPECT_EQ(lambda->points(),
            (std::vector<double>{20.0, 40.0, 60.0, 80.0, 100.0}));
  double total = 0.0;
  for (const auto& fs : cfg.functions) {
    EXPECT_EQ(fs.workload.service, ServiceDistribution::exponential(0.2));
    total += fs.workload.rate(cfg.grid, 1);
  }
  EXPECT_DOUBLE_EQ(total, 20.0);
  const auto* cold = cfg.find_sweep(SweepAxis::kColdDelay);
  ASSERT_NE(cold, nullptr);
  const auto pts = cold->points();
  ASSERT_EQ(pts.size(), 8u);
  EXPECT_EQ(pts.front(), 0.15);
  EXPECT_EQ(pts[3], 0.45);
  EXPECT_EQ(pts.back(), 0.85);
  double fmin = 1e300;
  double fmax = 0.0;
  for (const auto& s : cfg.servers) {
    fmin = std::min(fmin, s.cpu_freq);
    fmax = std::max(fmax, s.cpu_freq);
  }
  EXPECT_EQ(fmin, 1e9);
  EXPECT_EQ(fmax, 2e9);
}

TEST(ParseScenario, MissingFile) {
  EXPECT_THROW(parse_scenario(kScenarios / "does_not_exist.toml"),
               ConfigError);
}

TEST(ParseScenario, MinimalParses) {
  const auto cfg = parse_scenario_text(kMinimal);
  EXPECT_EQ(cfg.name, "minimal");
  ASSERT_EQ(cfg.functions.size(), 1u);
  EXPECT_EQ(cfg.functions[0].workload.lambda_per_slot,
            (std::vector<double>{2.0, 3.0}));
  EXPECT_EQ(cfg.servers[0].eta, kDefaultEta);
}

TEST(ParseScenario, NegativeLambdaNamesTheField) {
  std::string text = kMinimal;
  text.replace(text.find("[2.0, 3.0]"), 10, "[2.0, -3.0]");
  EXPECT_TRUE(has_path(error_of(text), "function[0].lambda[1]"));
}

TEST(ParseScenario, ExponentialSecondMomentConstraint) {
  std::string text = kMinimal;
  text.replace(text.find("mean = 0.2"), 10,
               "mean = 0.2\nsecond_moment = 0.05");
  EXPECT_TRUE(has_path(error_of(text), "function[0].second_moment"));
}

TEST(ParseScenario, CollectsAllViolations) {
  std::string text = kMinimal;
  text.replace(text.find("slot_length = 10.0"), 18, "slot_length = -1.0");
  text.replace(text.find("[2.0, 3.0]"), 10, "[2.0]");
  text += "bogus = 1\n";
  const auto e = error_of(text);
  EXPECT_TRUE(has_path(e, "grid.slot_length"));
  EXPECT_TRUE(has_path(e, "function[0].lambda"));
  EXPECT_TRUE(has_path(e, "server[0].bogus"));
  EXPECT_GE(e.violations().size(), 3u);
}

TEST(ParseScenario, RequiresFunctionsAndServers) {
  const auto e = error_of(R"(
[grid]
slot_length = 1.0
slot_count = 1
[channel]
bandwidth = 1e6
channel_gain = 1.0
tx_power = 1.0
noise_power = 1.0
packet_size = 1000.0
[gateway]
service = "deterministic"
mean = 0.001
)");
  EXPECT_TRUE(has_path(e, "function"));
  EXPECT_TRUE(has_path(e, "server"));
}

TEST(ParseScenario, SyntaxErrorsBecomeViolations) {
  const auto e = error_of("name = \n[grid\n");
  ASSERT_FALSE(e.violations().empty());
  EXPECT_EQ(e.violations().front().path.rfind("line ", 0), 0u);
}

// Random admissible configs survive serialize -> parse unchanged.
TEST(SerializeScenario, RoundTripProperty) {
  std::mt19937_64 gen(2024);
  auto uni = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  };
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  };
  for (int iter = 0; iter < 300; ++iter) {
    ScenarioConfig cfg;
    cfg.name = "rt_" + std::to_string(iter);
    cfg.wait_formula = pick(0, 1) ? WaitFormula::kGeneral : WaitFormula::kLiteral;
    cfg.grid = {uni(0.1, 100.0), pick(1, 6)};
    cfg.channel = {uni(1e3, 1e8), uni(0.1, 10.0), uni(0.1, 5.0),
                   uni(0.01, 2.0), uni(1.0, 1e4)};
    cfg.stages = {pick(0, 1) == 1, pick(0, 1) == 1, pick(0, 1) == 1};
    cfg.gateway_service = ServiceDistribution::general(0.01, 0.0002);
    const int nf = pick(1, 4);
    for (int f = 0; f < nf; ++f) {
      FunctionSpec fs;
      fs.workload.id = f + 1;
      fs.workload.topics = {"topic " + std::to_string(f), "x\"y"};
      if (pick(0, 1)) fs.workload.emit_topic = "topic 0";
      for (int s = 0; s < cfg.grid.slot_count; ++s) {
        fs.workload.lambda_per_slot.push_back(pick(0, 1) ? uni(0.0, 50.0) : 1.5);
      }
      switch (pick(0, 2)) {
        case 0:
          fs.workload.service = ServiceDistribution::deterministic(uni(0.01, 1));
          break;
        case 1:
          fs.workload.service = ServiceDistribution::exponential(uni(0.01, 1));
          break;
        default: {
          const double b = uni(0.01, 1);
          fs.workload.service = ServiceDistribution::general(b, b * b * uni(1, 4));
        }
      }
      fs.initial_replicas = pick(0, 2);
      fs.n_max = pick(2, 10);
      if (pick(0, 1)) fs.workload.packet_size = uni(1.0, 1e4);
      cfg.functions.push_back(fs);
    }
    const int ns = pick(1, 3);
    for (int s = 0; s < ns; ++s) {
      ServerPowerParams p;
      p.id = s + 1;
      p.idle_power = uni(10, 200);
      p.gamma1 = uni(0, 100);
      p.gamma2 = uni(0, 200);
      p.eta = uni(1e-27, 1e-25);
      p.cpu_freq = uni(1e9, 2e9);
      p.core_count = pick(1, 8);
      p.cold_start_delay = uni(0.15, 0.85);
      p.max_containers = 16;
      cfg.servers.push_back(p);
    }
    cfg.placement = pick(0, 1) ? PlacementPolicy::kSingle
                               : PlacementPolicy::kRoundRobin;
    auto& a = cfg.autoscaler;
    a.enabled = pick(0, 1) == 1;
    a.threshold = uni(0.001, 1.0);
    a.evaluation = pick(0, 1) ? Evaluation::kPerEvent : Evaluation::kPerSlot;
    a.estimator = pick(0, 1) ? Estimator::kAnalyticFromMeasuredRate
                             : Estimator::kMeasuredWait;
    a.rate_window = uni(0.0, 5.0);
    a.scale_down_enabled = pick(0, 1) == 1;
    a.hysteresis = uni(0.0, 0.5);
    a.cooldown = pick(0, 3);
    a.floor = pick(0, 1);
    a.on_demand_launch = pick(0, 1) == 1;
    a.idle_timeout = uni(0.0, 10.0);
    cfg.simulation.seeds = {static_cast<std::uint64_t>(pick(1, 1000)),
                            static_cast<std::uint64_t>(pick(1, 1000))};
    cfg.simulation.backlog_cap = static_cast<std::uint64_t>(pick(10, 100000));
    cfg.simulation.warmup_fraction = uni(0.0, 0.5);
    cfg.simulation.batches = pick(2, 40);
    if (pick(0, 1)) cfg.output_dir = "out dir/" + std::to_string(iter);
    SweepSpec sweep;
    sweep.axis = SweepAxis::kContainers;
    sweep.from = 1.0;
    sweep.to = 10.0;
    sweep.step = 1.0;
    if (pick(0, 1)) sweep.utilization = uni(0.0, 1.0);
    if (pick(0, 1)) sweep.function_id = 1;
    cfg.sweeps.push_back(sweep);

    ASSERT_TRUE(validate(cfg).empty())
        << validate(cfg).front().path << ": " << validate(cfg).front().reason;
    const std::string text = serialize_scenario(cfg);
    const ScenarioConfig back = parse_scenario_text(text);
    ASSERT_EQ(back, cfg) << text;
    EXPECT_EQ(serialize_scenario(back), text);
    EXPECT_EQ(config_digest(back), config_digest(cfg));
  }
}

TEST(ConfigDigest, ChangesWithContent) {
  auto cfg = parse_scenario_text(kMinimal);
  const auto d1 = config_digest(cfg);
  EXPECT_EQ(d1.size(), 16u);
  cfg.servers[0].cold_start_delay = 0.6;
  EXPECT_NE(config_digest(cfg), d1);
}

TEST(SetHorizon, ExtendsWithTheLastRate) {
  auto cfg = parse_scenario_text(kMinimal);
  set_horizon(cfg, 45.0);
  EXPECT_EQ(cfg.grid.slot_count, 5);
  EXPECT_EQ(cfg.functions[0].workload.lambda_per_slot,
            (std::vector<double>{2.0, 3.0, 3.0, 3.0, 3.0}));
  EXPECT_TRUE(validate(cfg).empty());
  set_horizon(cfg, 10.0);
  EXPECT_EQ(cfg.grid.slot_count, 1);
}

TEST(ScenarioConfig, RoutingAndPlacement) {
  auto cfg = parse_scenario_text(kMinimal);
  cfg.functions.push_back(cfg.functions[0]);
  cfg.functions[1].workload.id = 2;
  cfg.functions[1].workload.topics = {"b", "a"};
  cfg.servers.push_back(cfg.servers[0]);
  cfg.servers[1].id = 2;
  EXPECT_EQ(cfg.route("a"), 0u);
  EXPECT_EQ(cfg.route("b"), 1u);
  EXPECT_FALSE(cfg.route("c").has_value());
  EXPECT_EQ(cfg.host_server(1), 0u);
  cfg.placement = PlacementPolicy::kRoundRobin;
  EXPECT_EQ(cfg.host_server(1), 1u);
  EXPECT_EQ(cfg.pool_rates(1), (std::vector<double>{2.0, 2.0}));
  cfg.functions[1].workload.emit_topic = "a";
  EXPECT_EQ(cfg.pool_rates(1), (std::vector<double>{4.0, 0.0}));
}

}  // namespace
}  // namespace faaspipe
