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

#ifndef FAASPIPE_QUEUEING_H_
#define FAASPIPE_QUEUEING_H_

#include <optional>
#include <string_view>
#include <vector>

#include "faaspipe/workload.h"

namespace faaspipe {

// A stage is stable when load/servers <= 1 - kStabilityMargin. Points closer
// to saturation are reported as unstable.
inline constexpr double kStabilityMargin = 1e-9;

bool is_stable(double load, double servers);

// Which closed form evaluates the multi-server waiting time.
//   kGeneral       M/G/n approximation in (b, b2); textbook M/M/n when
//                  b2 = 2b^2. Default.
//   kLiteral  the exponential-service specialization as printed, which
//                  keeps a factor 1/2 and so yields half the M/M/n wait.
enum class WaitFormula { kGeneral, kLiteral };

const char* to_string(WaitFormula formula);
std::optional<WaitFormula> parse_wait_formula(std::string_view name);

struct ChannelParams {
  double bandwidth = 1e6;    // Hz
  double channel_gain = 1.0;  // linear
  double tx_power = 1.0;     // W
  double noise_power = 1.0;  // W
  double packet_size = 1e3;  // bits

  bool operator==(const ChannelParams&) const = default;
};

// Shannon rate B log2(1 + G w / sigma^2) in bits/second.
double wireless_rate(const ChannelParams& ch);

// Controller transmission: deterministic service D = packet_size / rate.
struct ControllerModel {
  double service_rate = 0.0;  // events/second
  double service_time = 0.0;  // seconds

  // Throws std::invalid_argument when the channel carries no traffic.
  static ControllerModel from_channel(const ChannelParams& ch);
};

struct ControllerLatency {
  double waiting = 0.0;
  double total = 0.0;
};

// M/D/1 controller sojourn. Throws UnstableError when lambda/mu >= 1.
ControllerLatency controller_latency(double lambda_total, double mu);

// Pollaczek-Khinchine mean wait for M/G/1.
double mg1_wait(double lambda, const ServiceDistribution& sd);

// Gateway response: mg1_wait + b.
double gateway_response(double lambda, const ServiceDistribution& sd);

double event_processing_time(double controller_ts, double gateway_tg);

// M/G/n mean wait for a replica pool of size n.
//
// The Erlang sum and the rho^n/(n-1)! term are built with a running product
// that is rescaled by 2^-600 whenever it grows past 2^600; both share the
// scale, so their ratio is exact to rounding for any n that fits an int.
// Throws NoReplicaError for n == 0 and UnstableError when lambda*b >= n.
double mgn_wait(double lambda, const ServiceDistribution& sd, int n,
                WaitFormula formula = WaitFormula::kGeneral);

// Pool response: mgn_wait + b, with b the function's own mean service time.
double function_response(double lambda, const ServiceDistribution& sd, int n,
                         WaitFormula formula = WaitFormula::kGeneral);

double total_latency(double controller_ts, double gateway_tg,
                     double function_tf);

// lambda / (n mu).
double function_utilization(double lambda, double mu, int n);

// Smallest n in 1..n_max with mgn_wait < threshold. Unstable counts are
// skipped. Throws InfeasibleError when none qualifies.
int min_replicas_for_threshold(double lambda, const ServiceDistribution& sd,
                               double threshold, int n_max,
                               WaitFormula formula = WaitFormula::kGeneral);

// Closed-form stage decomposition for one slot.
struct StageDelays {
  double controller_ts = 0.0;
  double gateway_wg = 0.0;
  double gateway_tg = 0.0;
  std::vector<double> function_wf;
  std::vector<double> function_tf;
  std::vector<double> function_total;
  double tp = 0.0;
};

}  // namespace faaspipe

#endif  // FAASPIPE_QUEUEING_H_
