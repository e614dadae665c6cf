// Copyright 2026 The mieflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment configuration files.
//
// Grammar (one entry per line):
//
//   # comment
//   [section]                 keys below are read as "section.key"
//   key = value               value: number, true/false, "string", or
//                             [value, value, ...] on one line
//
// Keys are [A-Za-z0-9_.-]+ and may appear once. `schema_version = 1` is
// required.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mieflow::cli {

inline constexpr int kSchemaVersion = 1;

/// Invalid configuration; `line` is 0 when the problem is not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string file, int line, const std::string& message);
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

struct Value {
  enum class Kind { boolean, number, string, list };
  Kind kind = Kind::number;
  bool boolean = false;
  double number = 0.0;
  std::string text;
  std::vector<Value> items;
  int line = 0;
};

class Config {
 public:
  static Config parse(const std::string& text, const std::string& file = "<config>");
  static Config load(const std::string& path);

  [[nodiscard]] const std::string& file() const { return file_; }
  [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) != 0; }
  /// Line of the entry, or 0.
  [[nodiscard]] int line_of(const std::string& key) const;

  std::string get_string(const std::string& key, std::optional<std::string> fallback = std::nullopt);
  double get_double(const std::string& key, std::optional<double> fallback = std::nullopt);
  long long get_int(const std::string& key, std::optional<long long> fallback = std::nullopt);
  bool get_bool(const std::string& key, std::optional<bool> fallback = std::nullopt);
  std::vector<double> get_double_list(const std::string& key,
                                      std::optional<std::vector<double>> fallback = std::nullopt);
  std::vector<long long> get_int_list(const std::string& key,
                                      std::optional<std::vector<long long>> fallback = std::nullopt);

  /// Throws ConfigError(line, ...) attributed to `key`.
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;
  /// Throws for the first entry no getter has read.
  void check_all_used() const;

  /// Entries in file order as (key, source text of the value).
  [[nodiscard]] std::vector<std::pair<std::string, std::string>> echo() const;

 private:
  const Value& require(const std::string& key, Value::Kind kind, const char* what);

  std::string file_;
  std::map<std::string, Value> entries_;
  std::vector<std::string> order_;
  std::map<std::string, std::string> source_;
  std::set<std::string> used_;
};

}  // namespace mieflow::cli
