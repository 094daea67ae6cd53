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

#ifndef FAASPIPE_TOML_LITE_H_
#define FAASPIPE_TOML_LITE_H_

// Reader for the TOML subset used by scenario files: comments, [table] and
// [a.b] headers, [[array.of.tables]], and key = value pairs whose values are
// strings, integers, floats, booleans or (possibly multi-line) arrays of
// those. Inline tables, dates and multi-line strings are not supported.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace faaspipe::toml_lite {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<bool, std::int64_t, double, std::string, Array> data;
  int line = 0;

  bool is_number() const {
    return std::holds_alternative<std::int64_t>(data) ||
           std::holds_alternative<double>(data);
  }
  double as_double() const {
    if (const auto* i = std::get_if<std::int64_t>(&data)) {
      return static_cast<double>(*i);
    }
    return std::get<double>(data);
  }
};

struct Table {
  std::map<std::string, Value> values;
  std::map<std::string, Table> tables;
  std::map<std::string, std::vector<Table>> table_arrays;
  int line = 0;
  bool defined = false;  // opened by an explicit [header]
};

struct SyntaxError {
  int line = 0;
  std::string message;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<SyntaxError> errors);
  const std::vector<SyntaxError>& errors() const { return errors_; }

 private:
  std::vector<SyntaxError> errors_;
};

// Throws ParseError listing every malformed line.
Table parse(std::string_view text);

// Emits a value in the syntax parse() reads back to an equal value. Doubles
// use the shortest round-trip representation.
std::string format_double(double value);
std::string quote(std::string_view text);

}  // namespace faaspipe::toml_lite

#endif  // FAASPIPE_TOML_LITE_H_
