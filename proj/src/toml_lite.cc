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

#include "faaspipe/toml_lite.h"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

namespace faaspipe::toml_lite {
namespace {

std::string summarize(const std::vector<SyntaxError>& errors) {
  std::string out = "scenario syntax error(s):";
  for (const auto& e : errors) {
    out += "\n  line " + std::to_string(e.line) + ": " + e.message;
  }
  return out;
}

bool is_bare_key_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Table run() {
    root_.line = 1;
    current_ = &root_;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      const std::size_t errors_before = errors_.size();
      if (peek() == '[') {
        parse_header();
      } else {
        parse_key_value();
      }
      if (errors_.size() == errors_before) expect_line_end();
      if (errors_.size() != errors_before) skip_to_next_line();
    }
    if (!errors_.empty()) throw ParseError(errors_);
    return std::move(root_);
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void fail(std::string message) {
    errors_.push_back({line_, std::move(message)});
  }

  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) advance();
  }

  void skip_comment() {
    if (peek() != '#') return;
    while (!eof() && peek() != '\n') advance();
  }

  // Whitespace, newlines and comments.
  void skip_blank_lines() {
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  void skip_to_next_line() {
    while (!eof() && peek() != '\n') advance();
  }

  void expect_line_end() {
    skip_spaces();
    skip_comment();
    if (peek() == '\r') advance();
    if (eof()) return;
    if (peek() != '\n') {
      fail(std::string("unexpected '") + peek() + "' after value");
      return;
    }
    advance();
  }

  bool parse_key(std::string& key) {
    skip_spaces();
    if (peek() == '"' || peek() == '\'') {
      return parse_string(key);
    }
    const std::size_t start = pos_;
    while (!eof() && is_bare_key_char(peek())) advance();
    if (pos_ == start) {
      fail("expected a key");
      return false;
    }
    key.assign(text_.substr(start, pos_ - start));
    return true;
  }

  bool parse_dotted_key(std::vector<std::string>& path) {
    while (true) {
      std::string part;
      if (!parse_key(part)) return false;
      path.push_back(std::move(part));
      skip_spaces();
      if (peek() != '.') return true;
      advance();
    }
  }

  void parse_header() {
    const int header_line = line_;
    advance();
    const bool is_array = peek() == '[';
    if (is_array) advance();
    std::vector<std::string> path;
    if (!parse_dotted_key(path)) return;
    skip_spaces();
    if (peek() != ']') return fail("expected ']' to close table header");
    advance();
    if (is_array) {
      if (peek() != ']') return fail("expected ']]' to close array header");
      advance();
    }

    Table* table = &root_;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      if (auto it = table->table_arrays.find(path[i]);
          it != table->table_arrays.end()) {
        table = &it->second.back();
        continue;
      }
      Table& next = table->tables[path[i]];
      if (next.line == 0) next.line = header_line;
      table = &next;
    }
    const std::string& last = path.back();
    if (is_array) {
      if (table->tables.count(last) || table->values.count(last)) {
        return fail("'" + last + "' is already defined as a non-array");
      }
      auto& list = table->table_arrays[last];
      list.emplace_back();
      list.back().line = header_line;
      current_ = &list.back();
    } else {
      if (table->table_arrays.count(last) || table->values.count(last)) {
        return fail("'" + last + "' is already defined");
      }
      Table& target = table->tables[last];
      if (target.defined) {
        return fail("table [" + last + "] defined twice");
      }
      target.defined = true;
      target.line = header_line;
      current_ = &target;
    }
  }

  void parse_key_value() {
    const int key_line = line_;
    std::string key;
    if (!parse_key(key)) return;
    skip_spaces();
    if (peek() == '.') return fail("dotted keys are not supported");
    if (peek() != '=') return fail("expected '=' after key '" + key + "'");
    advance();
    skip_spaces();
    Value value;
    if (!parse_value(value)) return;
    value.line = key_line;
    if (current_->values.count(key) || current_->tables.count(key) ||
        current_->table_arrays.count(key)) {
      return fail("duplicate key '" + key + "'");
    }
    current_->values.emplace(std::move(key), std::move(value));
  }

  bool parse_string(std::string& out) {
    const char quote = peek();
    advance();
    out.clear();
    while (true) {
      if (eof() || peek() == '\n') {
        fail("unterminated string");
        return false;
      }
      char c = peek();
      advance();
      if (c == quote) return true;
      if (c == '\\' && quote == '"') {
        if (eof()) continue;
        const char e = peek();
        advance();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default:
            fail(std::string("unsupported escape '\\") + e + "'");
            return false;
        }
        continue;
      }
      out += c;
    }
  }

  bool parse_number_or_bool(Value& value) {
    const std::size_t start = pos_;
    while (!eof()) {
      const char c = peek();
      if (c == ',' || c == ']' || c == ' ' || c == '\t' || c == '\r' ||
          c == '\n' || c == '#') {
        break;
      }
      advance();
    }
    std::string token(text_.substr(start, pos_ - start));
    if (token == "true" || token == "false") {
      value.data = token == "true";
      return true;
    }
    std::string digits;
    for (char c : token) {
      if (c != '_') digits += c;
    }
    if (!digits.empty() && digits.front() == '+') digits.erase(0, 1);
    if (digits.empty()) {
      fail("expected a value");
      return false;
    }
    const bool is_float =
        digits.find_first_of(".eE") != std::string::npos ||
        digits == "inf" || digits == "-inf" || digits == "nan";
    const char* first = digits.data();
    const char* last = digits.data() + digits.size();
    if (is_float) {
      double d = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, d);
      if (ec != std::errc() || ptr != last) {
        fail("malformed number '" + token + "'");
        return false;
      }
      value.data = d;
    } else {
      std::int64_t i = 0;
      auto [ptr, ec] = std::from_chars(first, last, i);
      if (ec != std::errc() || ptr != last) {
        fail("malformed value '" + token + "'");
        return false;
      }
      value.data = i;
    }
    return true;
  }

  bool parse_array(Value& value) {
    advance();  // '['
    Array items;
    while (true) {
      skip_blank_lines();
      if (eof()) {
        fail("unterminated array");
        return false;
      }
      if (peek() == ']') {
        advance();
        break;
      }
      Value item;
      item.line = line_;
      if (!parse_value(item)) return false;
      items.push_back(std::move(item));
      skip_blank_lines();
      if (peek() == ',') {
        advance();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
        return false;
      }
    }
    value.data = std::move(items);
    return true;
  }

  bool parse_value(Value& value) {
    value.line = line_;
    const char c = peek();
    if (c == '"' || c == '\'') {
      std::string s;
      if (!parse_string(s)) return false;
      value.data = std::move(s);
      return true;
    }
    if (c == '[') return parse_array(value);
    if (c == '{') {
      fail("inline tables are not supported");
      return false;
    }
    return parse_number_or_bool(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  Table root_;
  Table* current_ = nullptr;
  std::vector<SyntaxError> errors_;
};

}  // namespace

ParseError::ParseError(std::vector<SyntaxError> errors)
    : std::runtime_error(summarize(errors)), errors_(std::move(errors)) {}

Table parse(std::string_view text) { return Parser(text).run(); }

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  std::string out(buf.data(), ptr);
  if (std::isfinite(value) &&
      out.find_first_of(".e") == std::string::npos) {
    out += ".0";
  }
  return out;
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace faaspipe::toml_lite
