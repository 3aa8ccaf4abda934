// Copyright 2026 The rydgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rydgate/config.hpp"

namespace rydgate::detail {

/// Reads fields from one JSON object, remembering which keys were consumed
/// so that leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ConfigError((path.empty() ? std::string("/") : path) + ": " + what);
  }

  std::string field(const std::string& key) const { return path_ + "/" + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const nlohmann::json& raw(const std::string& key) {
    if (!j_.contains(key)) fail(field(key), "required field is missing");
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number()) fail(field(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(field(key), "must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }
  std::optional<double> optional_number(const std::string& key) {
    if (!has(key) || j_.at(key).is_null()) {
      if (has(key)) used_.insert(key);
      return std::nullopt;
    }
    return number(key);
  }

  long integer(const std::string& key, long lo = std::numeric_limits<long>::min(),
               long hi = std::numeric_limits<long>::max()) {
    const auto& v = raw(key);
    if (!v.is_number_integer()) fail(field(key), "expected an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(hi)) {
      fail(field(key), "out of range");
    }
    const long x = v.get<long>();
    if (x < lo || x > hi) {
      fail(field(key), "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return x;
  }
  long integer(const std::string& key, long fallback, long lo, long hi) {
    return has(key) ? integer(key, lo, hi) : fallback;
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    fail(field(key), "expected a non-negative integer");
  }

  bool boolean(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_boolean()) fail(field(key), "expected true or false");
    return v.get<bool>();
  }
  bool boolean(const std::string& key, bool fallback) { return has(key) ? boolean(key) : fallback; }

  std::string string(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_string()) fail(field(key), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  std::vector<double> numbers(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_array()) fail(field(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(field(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
      if (!std::isfinite(out.back())) fail(field(key) + "/" + std::to_string(i), "must be finite");
    }
    return out;
  }

  ObjectReader object(const std::string& key) { return ObjectReader(raw(key), field(key)); }

  /// Parses an enum-like string, turning the parser's exception into a
  /// diagnostic for this field.
  template <typename F>
  auto choice(const std::string& key, F parse) {
    const std::string s = string(key);
    try {
      return parse(s);
    } catch (const std::exception& e) {
      fail(field(key), e.what());
    }
  }
  template <typename F, typename T>
  T choice(const std::string& key, F parse, T fallback) {
    return has(key) ? choice(key, parse) : fallback;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) fail(field(it.key()), "unknown field");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> used_;
};

}  // namespace rydgate::detail
