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

#ifndef FAASPIPE_ERRORS_H_
#define FAASPIPE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace faaspipe {

// A queueing stage whose offered load reaches its server count. This is a
// modeling outcome (saturation), not a programming error.
class UnstableError : public std::domain_error {
 public:
  UnstableError(const std::string& stage, double load, double servers)
      : std::domain_error(stage + ": offered load " + std::to_string(load) +
                          " >= " + std::to_string(servers) + " server(s)"),
        load_(load),
        servers_(servers) {}

  double load() const { return load_; }
  double servers() const { return servers_; }

 private:
  double load_;
  double servers_;
};

// Waiting time requested for a pool with no running instance.
class NoReplicaError : public std::domain_error {
 public:
  NoReplicaError() : std::domain_error("pool has no running replica") {}
};

class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(int n_max)
      : std::runtime_error("no replica count <= " + std::to_string(n_max) +
                           " meets the delay threshold"),
        n_max_(n_max) {}

  int n_max() const { return n_max_; }

 private:
  int n_max_;
};

class OverCapacityError : public std::runtime_error {
 public:
  OverCapacityError(int requested, int capacity)
      : std::runtime_error("requested " + std::to_string(requested) +
                           " containers on a server with capacity " +
                           std::to_string(capacity)) {}
};

// One violated constraint in a scenario, located by a dotted field path.
struct Violation {
  std::string path;
  std::string reason;

  bool operator==(const Violation&) const = default;
};

// Raised with every violation found, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Violation> violations)
      : std::runtime_error(Summarize(violations)),
        violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string Summarize(const std::vector<Violation>& violations) {
    std::string out = "invalid scenario:";
    for (const auto& v : violations) out += "\n  " + v.path + ": " + v.reason;
    return out;
  }

  std::vector<Violation> violations_;
};

}  // namespace faaspipe

#endif  // FAASPIPE_ERRORS_H_
