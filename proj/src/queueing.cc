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

#include "faaspipe/queueing.h"

#include <cmath>
#include <stdexcept>

#include "faaspipe/errors.h"

namespace faaspipe {
namespace {

void check_rate(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("arrival rate must be finite and >= 0");
  }
}

}  // namespace

bool is_stable(double load, double servers) {
  return load <= servers * (1.0 - kStabilityMargin);
}

const char* to_string(WaitFormula formula) {
  return formula == WaitFormula::kGeneral ? "general"
                                          : "literal";
}

std::optional<WaitFormula> parse_wait_formula(std::string_view name) {
  if (name == "general") return WaitFormula::kGeneral;
  if (name == "literal") return WaitFormula::kLiteral;
  return std::nullopt;
}

double wireless_rate(const ChannelParams& ch) {
  if (!(ch.bandwidth > 0.0)) {
    throw std::invalid_argument("channel bandwidth must be positive");
  }
  if (!(ch.noise_power > 0.0)) {
    throw std::invalid_argument("channel noise power must be positive");
  }
  return ch.bandwidth *
         std::log2(1.0 + ch.channel_gain * ch.tx_power / ch.noise_power);
}

ControllerModel ControllerModel::from_channel(const ChannelParams& ch) {
  if (!(ch.packet_size > 0.0)) {
    throw std::invalid_argument("packet size must be positive");
  }
  const double rate = wireless_rate(ch);
  if (!(rate > 0.0)) {
    throw std::invalid_argument("channel rate is zero; controller cannot "
                                "transmit");
  }
  ControllerModel model;
  model.service_rate = rate / ch.packet_size;
  model.service_time = ch.packet_size / rate;
  return model;
}

ControllerLatency controller_latency(double lambda_total, double mu) {
  check_rate(lambda_total);
  if (!(mu > 0.0)) throw std::invalid_argument("service rate must be > 0");
  // M/D/1 is M/G/1 with b2 = b^2; share the arithmetic with mg1_wait.
  const double service_time = 1.0 / mu;
  const double rho = lambda_total * service_time;
  if (!is_stable(rho, 1.0)) throw UnstableError("controller", rho, 1.0);
  ControllerLatency out;
  out.waiting = mg1_wait(lambda_total,
                         ServiceDistribution::deterministic(service_time));
  out.total = out.waiting + service_time;
  return out;
}

double mg1_wait(double lambda, const ServiceDistribution& sd) {
  check_rate(lambda);
  const double rho = lambda * sd.mean();
  if (!is_stable(rho, 1.0)) throw UnstableError("M/G/1 stage", rho, 1.0);
  return lambda * sd.second_moment() / (2.0 * (1.0 - rho));
}

double gateway_response(double lambda, const ServiceDistribution& sd) {
  return mg1_wait(lambda, sd) + sd.mean();
}

double event_processing_time(double controller_ts, double gateway_tg) {
  return controller_ts + gateway_tg;
}

double mgn_wait(double lambda, const ServiceDistribution& sd, int n,
                WaitFormula formula) {
  check_rate(lambda);
  if (n <= 0) throw NoReplicaError();
  const double b = sd.mean();
  const double rho = lambda * b;
  if (!is_stable(rho, n)) throw UnstableError("function pool", rho, n);
  if (rho == 0.0) return 0.0;

  constexpr double kRescaleAbove = 0x1.0p600;
  constexpr double kRescale = 0x1.0p-600;
  double term = 1.0;  // rho^i / i!, up to the shared scale
  double erlang_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    erlang_sum += term;
    if (i + 1 < n) {
      term *= rho / (i + 1);
      if (term > kRescaleAbove) {
        term *= kRescale;
        erlang_sum *= kRescale;
      }
    }
  }
  // rho^n / (n-1)!, same scale as erlang_sum.
  const double tail = term * rho;
  const double gap = n - rho;
  const double bracket = erlang_sum + tail / gap;

  if (formula == WaitFormula::kGeneral) {
    // lambda^n b2 b^(n-1) / (n-1)! == tail * b2 / b
    return (sd.second_moment() / b) * tail / (2.0 * gap * gap * bracket);
  }
  return tail / (2.0 * sd.rate() * gap * gap * bracket);
}

double function_response(double lambda, const ServiceDistribution& sd, int n,
                         WaitFormula formula) {
  return mgn_wait(lambda, sd, n, formula) + sd.mean();
}

double total_latency(double controller_ts, double gateway_tg,
                     double function_tf) {
  return controller_ts + gateway_tg + function_tf;
}

double function_utilization(double lambda, double mu, int n) {
  check_rate(lambda);
  if (!(mu > 0.0)) throw std::invalid_argument("service rate must be > 0");
  if (n <= 0) throw NoReplicaError();
  const double rho = lambda / mu;
  if (!is_stable(rho, n)) throw UnstableError("function pool", rho, n);
  return lambda / (n * mu);
}

int min_replicas_for_threshold(double lambda, const ServiceDistribution& sd,
                               double threshold, int n_max,
                               WaitFormula formula) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("delay threshold must be positive");
  }
  const double rho = lambda * sd.mean();
  for (int n = 1; n <= n_max; ++n) {
    if (!is_stable(rho, n)) continue;
    if (mgn_wait(lambda, sd, n, formula) < threshold) return n;
  }
  throw InfeasibleError(n_max);
}

}  // namespace faaspipe
