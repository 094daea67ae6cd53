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

#include <cmath>
#include <limits>
#include <random>

#include "faaspipe/errors.h"
#include "faaspipe/queueing.h"

namespace faaspipe {
namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// M/M/n wait through the Erlang-B recurrence, independent of the library.
double erlang_c_wait(double lambda, double mu, int n) {
  const double a = lambda / mu;
  double b = 1.0;
  for (int k = 1; k <= n; ++k) b = a * b / (k + a * b);
  const double c = n * b / (n - a * (1.0 - b));
  return c / (n * mu - lambda);
}

// The same quantity written with factorials, C/(mu (n - rho)).
double erlang_c_factorial(double lambda, double mu, int n) {
  const double rho = lambda / mu;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += std::pow(rho, i) / std::tgamma(i + 1.0);
  const double tail = std::pow(rho, n) / (std::tgamma(n) * (n - rho));
  return tail / (sum + tail) / (mu * (n - rho));
}

TEST(WirelessRate, Examples) {
  ChannelParams ch;
  ch.bandwidth = 1e6;
  EXPECT_DOUBLE_EQ(wireless_rate(ch), 1e6);
  ch.channel_gain = 0.0;
  EXPECT_EQ(wireless_rate(ch), 0.0);
  ch.channel_gain = 15.0;
  ch.bandwidth = 2e7;
  EXPECT_DOUBLE_EQ(wireless_rate(ch), 8e7);
  ch.bandwidth = 0.0;
  EXPECT_THROW(wireless_rate(ch), std::invalid_argument);
  ch.bandwidth = 1e6;
  ch.noise_power = 0.0;
  EXPECT_THROW(wireless_rate(ch), std::invalid_argument);
}

TEST(ControllerModel, ServiceRateFromChannel) {
  ChannelParams ch;
  ch.packet_size = 1000.0;
  const auto m = ControllerModel::from_channel(ch);
  EXPECT_DOUBLE_EQ(m.service_rate, 1000.0);
  EXPECT_DOUBLE_EQ(m.service_time, 1e-3);
  ch.channel_gain = 0.0;
  EXPECT_THROW(ControllerModel::from_channel(ch), std::invalid_argument);
}

TEST(ControllerLatency, Examples) {
  const auto idle = controller_latency(0.0, 1000.0);
  EXPECT_EQ(idle.waiting, 0.0);
  EXPECT_DOUBLE_EQ(idle.total, 1e-3);
  const auto half = controller_latency(500.0, 1000.0);
  EXPECT_NEAR(half.waiting, 0.0005, 1e-15);
  EXPECT_NEAR(half.total, 0.0015, 1e-15);
  EXPECT_THROW(controller_latency(1000.0, 1000.0), UnstableError);
  EXPECT_THROW(controller_latency(2000.0, 1000.0), UnstableError);
}

TEST(ControllerLatency, MatchesClosedFormOverLoads) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> mu_d(1.0, 1e6);
  std::uniform_real_distribution<double> rho_d(0.0, 0.99);
  for (int i = 0; i < 1000; ++i) {
    const double mu = mu_d(gen);
    const double rho = rho_d(gen);
    const double lambda = rho * mu;
    const double w = rho / (2.0 * mu * (1.0 - rho));
    const auto got = controller_latency(lambda, mu);
    // 1 - rho amplifies rounding near saturation, hence the relative bound.
    EXPECT_LE(std::fabs(got.waiting - w), 1e-12 * w);
  }
}

TEST(Mg1Wait, Examples) {
  const auto exp = ServiceDistribution::exponential(0.2);
  EXPECT_NEAR(mg1_wait(2.5, exp), 0.2, 1e-15);
  EXPECT_EQ(mg1_wait(0.0, exp), 0.0);
  EXPECT_THROW(mg1_wait(5.0, exp), UnstableError);
  EXPECT_NEAR(gateway_response(0.0, exp), 0.2, 1e-15);
  EXPECT_NEAR(gateway_response(2.5, exp), 0.4, 1e-15);
  const auto det = ServiceDistribution::deterministic(0.001);
  EXPECT_NEAR(gateway_response(500.0, det), 0.0015, 1e-15);
}

TEST(Mg1Wait, MM1ClosedForm) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> mean_d(1e-3, 10.0);
  std::uniform_real_distribution<double> rho_d(0.0, 0.99);
  for (int i = 0; i < 1000; ++i) {
    const double b = mean_d(gen);
    const double mu = 1.0 / b;
    const double lambda = rho_d(gen) * mu;
    const double expect = lambda / (mu * (mu - lambda));
    const double got = mg1_wait(lambda, ServiceDistribution::exponential(b));
    if (lambda == 0.0) continue;
    EXPECT_LT(rel(got, expect), 1e-12);
  }
}

// Deterministic moments reduce the single-server wait to the controller's
// waiting term, bit for bit.
TEST(Mg1Wait, DeterministicEqualsControllerWaitExactly) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> mu_d(0.5, 1e5);
  std::uniform_real_distribution<double> rho_d(0.0, 0.999);
  for (int i = 0; i < 1000; ++i) {
    const double mu = mu_d(gen);
    const double lambda = rho_d(gen) * mu;
    const double via_mg1 =
        mg1_wait(lambda, ServiceDistribution::deterministic(1.0 / mu));
    EXPECT_EQ(via_mg1, controller_latency(lambda, mu).waiting);
  }
}

TEST(EventProcessingTime, Sums) {
  EXPECT_DOUBLE_EQ(event_processing_time(0.0015, 0.4), 0.4015);
  EXPECT_EQ(event_processing_time(0.0, 0.0), 0.0);
}

// Controller at 1000/s with an exponential 10 ms gateway at 100/s.
TEST(EventProcessingTime, SubstitutionPoint) {
  const double ts = controller_latency(100.0, 1000.0).total;
  const double tg =
      gateway_response(100.0, ServiceDistribution::exponential(0.002));
  const double rho = 0.1;
  const double ts_oracle = rho / (2.0 * 1000.0 * (1.0 - rho)) + 1e-3;
  const double tg_oracle = 100.0 * 2.0 * 0.002 * 0.002 / (2.0 * 0.8) + 0.002;
  EXPECT_NEAR(event_processing_time(ts, tg), ts_oracle + tg_oracle, 1e-15);
  // A 10 ms gateway at 100/s sits exactly on the stability boundary.
  EXPECT_THROW(
      gateway_response(100.0, ServiceDistribution::exponential(0.01)),
      UnstableError);
}

TEST(MgnWait, WorkedExample) {
  const auto exp = ServiceDistribution::exponential(0.2);
  EXPECT_NEAR(mgn_wait(5.0, exp, 2), 1.0 / 15.0, 1e-15);
  EXPECT_NEAR(function_response(5.0, exp, 2), 0.2 + 1.0 / 15.0, 1e-15);
  EXPECT_NEAR(function_response(2.5, exp, 1), 0.4, 1e-15);
  EXPECT_THROW(mgn_wait(10.0, exp, 2), UnstableError);
  EXPECT_THROW(mgn_wait(1.0, exp, 0), NoReplicaError);
  EXPECT_THROW(function_response(1.0, exp, 0), NoReplicaError);
}

TEST(MgnWait, ReducesToSingleServer) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> mean_d(1e-3, 5.0);
  std::uniform_real_distribution<double> scv_d(0.0, 5.0);
  std::uniform_real_distribution<double> rho_d(0.0, 0.99);
  for (int i = 0; i < 1000; ++i) {
    const double b = mean_d(gen);
    const auto sd = ServiceDistribution::general(b, b * b * (1.0 + scv_d(gen)));
    const double lambda = rho_d(gen) / b;
    const double one = mgn_wait(lambda, sd, 1);
    const double ref = mg1_wait(lambda, sd);
    if (ref == 0.0) {
      EXPECT_EQ(one, 0.0);
    } else {
      EXPECT_LE(rel(one, ref), 1e-12);
    }
  }
}

TEST(MgnWait, MatchesErlangC) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> load_d(0.01, 0.95);
  std::uniform_real_distribution<double> mean_d(0.01, 2.0);
  for (int n = 1; n <= 10; ++n) {
    for (int i = 0; i < 50; ++i) {
      const double b = mean_d(gen);
      const double lambda = load_d(gen) * n / b;
      const auto sd = ServiceDistribution::exponential(b);
      const double oracle = erlang_c_wait(lambda, 1.0 / b, n);
      EXPECT_LE(rel(mgn_wait(lambda, sd, n), oracle), 1e-9);
      EXPECT_LE(rel(erlang_c_factorial(lambda, 1.0 / b, n), oracle), 1e-9);
    }
  }
}

TEST(MgnWait, LiteralFormIsHalfTheErlangWait) {
  const auto exp = ServiceDistribution::exponential(0.2);
  for (int n = 1; n <= 10; ++n) {
    const double lambda = 0.7 * n * 5.0;
    EXPECT_LE(rel(mgn_wait(lambda, exp, n, WaitFormula::kLiteral),
                  0.5 * mgn_wait(lambda, exp, n)),
              1e-12);
  }
}

TEST(MgnWait, LargePoolsStayFinite) {
  const auto exp = ServiceDistribution::exponential(1.0);
  for (int n : {64, 128, 500, 1000}) {
    const double w = mgn_wait(0.9 * n, exp, n);
    EXPECT_TRUE(std::isfinite(w));
    EXPECT_GE(w, 0.0);
    EXPECT_LE(rel(w, erlang_c_wait(0.9 * n, 1.0, n)), 1e-9);
  }
}

TEST(MgnWait, MonotoneOnReferenceGrid) {
  const auto exp = ServiceDistribution::exponential(0.2);
  for (int n = 2; n <= 10; ++n) {
    double prev = -1.0;
    for (double lambda = 1.0; lambda <= 5.0 * n * 0.95; lambda += 0.5) {
      const double w = mgn_wait(lambda, exp, n);
      EXPECT_GT(w, prev);
      prev = w;
    }
  }
  for (double lambda : {1.0, 2.0, 3.0, 4.0, 5.0, 8.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 2; n <= 10; ++n) {
      if (lambda * 0.2 >= n) continue;
      const double w = mgn_wait(lambda, exp, n);
      EXPECT_LT(w, prev);
      prev = w;
    }
  }
}

TEST(MgnWait, StabilityMargin) {
  const auto exp = ServiceDistribution::exponential(1.0);
  EXPECT_NO_THROW(mgn_wait(2.0 * (1.0 - 2e-9), exp, 2));
  EXPECT_THROW(mgn_wait(2.0 * (1.0 - 5e-10), exp, 2), UnstableError);
  EXPECT_TRUE(is_stable(0.5, 1.0));
  EXPECT_FALSE(is_stable(1.0, 1.0));
}

TEST(FunctionResponse, ApproachesMeanWithManyReplicas) {
  const auto exp = ServiceDistribution::exponential(0.2);
  EXPECT_NEAR(function_response(1.0, exp, 40), 0.2, 1e-12);
}

TEST(TotalLatency, SumAndMonotone) {
  EXPECT_EQ(total_latency(0.0, 0.0, 0.3), 0.3);
  const auto exp = ServiceDistribution::exponential(0.2);
  const double ts = controller_latency(50.0, 1000.0).total;
  const double tg = gateway_response(50.0, ServiceDistribution::exponential(0.002));
  const double tf = function_response(2.5, exp, 4);
  EXPECT_DOUBLE_EQ(total_latency(ts, tg, tf), ts + tg + tf);
  EXPECT_GT(total_latency(ts + 1e-3, tg, tf), total_latency(ts, tg, tf));
  EXPECT_GT(total_latency(ts, tg + 1e-3, tf), total_latency(ts, tg, tf));
  EXPECT_GT(total_latency(ts, tg, tf + 1e-3), total_latency(ts, tg, tf));
}

TEST(FunctionUtilization, Examples) {
  EXPECT_DOUBLE_EQ(function_utilization(5.0, 5.0, 2), 0.5);
  EXPECT_EQ(function_utilization(0.0, 5.0, 2), 0.0);
  EXPECT_NEAR(function_utilization(4.5, 5.0, 3), 0.3, 1e-15);
  EXPECT_THROW(function_utilization(10.0, 5.0, 2), UnstableError);
  EXPECT_THROW(function_utilization(1.0, 5.0, 0), NoReplicaError);
}

TEST(MinReplicas, Examples) {
  const auto exp = ServiceDistribution::exponential(0.2);
  EXPECT_GT(erlang_c_wait(4.5, 5.0, 2), 0.05);
  EXPECT_LT(erlang_c_wait(4.5, 5.0, 3), 0.05);
  EXPECT_EQ(min_replicas_for_threshold(4.5, exp, 0.05, 10), 3);
  EXPECT_EQ(min_replicas_for_threshold(0.0, exp, 0.05, 10), 1);
  // An unbounded threshold only requires stability.
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(min_replicas_for_threshold(12.0, exp, inf, 10), 3);
  EXPECT_EQ(min_replicas_for_threshold(15.0, exp, inf, 10), 4);
  EXPECT_THROW(min_replicas_for_threshold(100.0, exp, 0.05, 10),
               InfeasibleError);
}

// Exhaustive search against the Erlang-C oracle.
TEST(MinReplicas, MatchesExhaustiveOracle) {
  const auto exp = ServiceDistribution::exponential(0.2);
  for (double lambda = 0.5; lambda <= 40.0; lambda += 0.5) {
    for (double t : {0.005, 0.02, 0.05, 0.2}) {
      int oracle = -1;
      for (int n = 1; n <= 12; ++n) {
        if (lambda * 0.2 < n && erlang_c_wait(lambda, 5.0, n) < t) {
          oracle = n;
          break;
        }
      }
      if (oracle < 0) {
        EXPECT_THROW(min_replicas_for_threshold(lambda, exp, t, 12),
                     InfeasibleError);
      } else {
        EXPECT_EQ(min_replicas_for_threshold(lambda, exp, t, 12), oracle);
      }
    }
  }
}

}  // namespace
}  // namespace faaspipe
