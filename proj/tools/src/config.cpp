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

#include "mieflow/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mieflow::cli {

namespace {

std::string location(const std::string& file, int line) {
  return line > 0 ? file + ":" + std::to_string(line) : file;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
  }
  return true;
}

class ValueParser {
 public:
  ValueParser(const std::string& text, const std::string& file, int line)
      : s_(text), file_(file), line_(line) {}

  Value parse_top() {
    Value v = parse_value(true);
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == '#') pos_ = s_.size();
    if (pos_ != s_.size()) error("unexpected text after value");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const { throw ConfigError(file_, line_, msg); }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Value parse_value(bool allow_list) {
    skip_space();
    if (pos_ >= s_.size()) error("missing value");
    Value v;
    v.line = line_;
    const char c = s_[pos_];
    if (c == '"') {
      v.kind = Value::Kind::string;
      ++pos_;
      while (true) {
        if (pos_ >= s_.size()) error("unterminated string");
        const char d = s_[pos_++];
        if (d == '"') break;
        if (d == '\\') {
          if (pos_ >= s_.size()) error("unterminated escape");
          const char e = s_[pos_++];
          if (e == 'n') {
            v.text += '\n';
          } else if (e == '"' || e == '\\') {
            v.text += e;
          } else {
            error(std::string("unknown escape \\") + e);
          }
        } else {
          v.text += d;
        }
      }
      return v;
    }
    if (c == '[') {
      if (!allow_list) error("nested lists are not supported");
      v.kind = Value::Kind::list;
      ++pos_;
      skip_space();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      while (true) {
        v.items.push_back(parse_value(false));
        skip_space();
        if (pos_ >= s_.size()) error("unterminated list");
        if (s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (s_[pos_] == ']') {
          ++pos_;
          break;
        }
        error("expected ',' or ']' in list");
      }
      return v;
    }
    std::size_t end = pos_;
    while (end < s_.size() && !std::isspace(static_cast<unsigned char>(s_[end])) && s_[end] != ',' &&
           s_[end] != ']' && s_[end] != '#') {
      ++end;
    }
    const std::string word = s_.substr(pos_, end - pos_);
    pos_ = end;
    if (word == "true" || word == "false") {
      v.kind = Value::Kind::boolean;
      v.boolean = word == "true";
      v.text = word;
      return v;
    }
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), x);
    if (word.empty() || ec != std::errc() || ptr != word.data() + word.size() || !std::isfinite(x)) {
      error("cannot parse value '" + word + "'");
    }
    v.kind = Value::Kind::number;
    v.number = x;
    v.text = word;
    return v;
  }

  const std::string& s_;
  const std::string& file_;
  int line_;
  std::size_t pos_ = 0;
};

const char* kind_name(Value::Kind k) {
  switch (k) {
    case Value::Kind::boolean:
      return "a boolean";
    case Value::Kind::number:
      return "a number";
    case Value::Kind::string:
      return "a string";
    case Value::Kind::list:
      return "a list";
  }
  return "?";
}

long long as_integer(const Config& cfg, const std::string& key, double x) {
  if (x != std::floor(x) || std::abs(x) > 9.0e15) cfg.fail(key, "expected an integer");
  return static_cast<long long>(x);
}

}  // namespace

ConfigError::ConfigError(std::string file, int line, const std::string& message)
    : std::runtime_error(location(file, line) + ": " + message), line_(line) {}

Config Config::parse(const std::string& text, const std::string& file) {
  Config cfg;
  cfg.file_ = file;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s[0] == '[') {
      const auto close = s.find(']');
      if (close == std::string::npos) throw ConfigError(file, line, "unterminated section header");
      const std::string rest = trim(s.substr(close + 1));
      if (!rest.empty() && rest[0] != '#') throw ConfigError(file, line, "text after section header");
      section = trim(s.substr(1, close - 1));
      if (!valid_key(section)) throw ConfigError(file, line, "invalid section name '" + section + "'");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(file, line, "expected 'key = value'");
    const std::string name = trim(s.substr(0, eq));
    if (!valid_key(name)) throw ConfigError(file, line, "invalid key '" + name + "'");
    const std::string key = section.empty() ? name : section + "." + name;
    if (cfg.entries_.count(key)) throw ConfigError(file, line, "duplicate key '" + key + "'");
    const std::string value_text = s.substr(eq + 1);
    ValueParser parser(value_text, file, line);
    cfg.entries_[key] = parser.parse_top();
    cfg.order_.push_back(key);
    std::string src = trim(value_text);
    // Drop a trailing comment outside strings.
    bool in_string = false;
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (src[i] == '"' && (i == 0 || src[i - 1] != '\\')) in_string = !in_string;
      if (src[i] == '#' && !in_string) {
        src = trim(src.substr(0, i));
        break;
      }
    }
    cfg.source_[key] = src;
  }
  if (!cfg.has("schema_version")) throw ConfigError(file, 0, "missing required key 'schema_version'");
  const long long version = cfg.get_int("schema_version");
  if (version != kSchemaVersion) {
    cfg.fail("schema_version", "unsupported schema_version " + std::to_string(version) +
                                   " (expected " + std::to_string(kSchemaVersion) + ")");
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

int Config::line_of(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

void Config::fail(const std::string& key, const std::string& message) const {
  throw ConfigError(file_, line_of(key), "'" + key + "': " + message);
}

const Value& Config::require(const std::string& key, Value::Kind kind, const char* what) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) fail(key, "missing required key");
  used_.insert(key);
  if (it->second.kind != kind) {
    fail(key, std::string("expected ") + what + ", found " + kind_name(it->second.kind));
  }
  return it->second;
}

std::string Config::get_string(const std::string& key, std::optional<std::string> fallback) {
  if (!has(key) && fallback) return *fallback;
  return require(key, Value::Kind::string, "a string").text;
}

double Config::get_double(const std::string& key, std::optional<double> fallback) {
  if (!has(key) && fallback) return *fallback;
  return require(key, Value::Kind::number, "a number").number;
}

long long Config::get_int(const std::string& key, std::optional<long long> fallback) {
  if (!has(key) && fallback) return *fallback;
  return as_integer(*this, key, require(key, Value::Kind::number, "an integer").number);
}

bool Config::get_bool(const std::string& key, std::optional<bool> fallback) {
  if (!has(key) && fallback) return *fallback;
  return require(key, Value::Kind::boolean, "a boolean").boolean;
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            std::optional<std::vector<double>> fallback) {
  if (!has(key) && fallback) return *fallback;
  const Value& v = require(key, Value::Kind::list, "a list of numbers");
  std::vector<double> out;
  for (const Value& item : v.items) {
    if (item.kind != Value::Kind::number) fail(key, "list entries must be numbers");
    out.push_back(item.number);
  }
  return out;
}

std::vector<long long> Config::get_int_list(const std::string& key,
                                            std::optional<std::vector<long long>> fallback) {
  if (!has(key) && fallback) return *fallback;
  const Value& v = require(key, Value::Kind::list, "a list of integers");
  std::vector<long long> out;
  for (const Value& item : v.items) {
    if (item.kind != Value::Kind::number) fail(key, "list entries must be integers");
    out.push_back(as_integer(*this, key, item.number));
  }
  return out;
}

void Config::check_all_used() const {
  for (const std::string& key : order_) {
    if (!used_.count(key)) fail(key, "unknown key for this experiment");
  }
}

std::vector<std::pair<std::string, std::string>> Config::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& key : order_) out.emplace_back(key, source_.at(key));
  return out;
}

}  // namespace mieflow::cli
