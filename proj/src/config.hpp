// Copyright 2026 The Fourswap Authors
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

#ifndef FOURSWAP_SRC_CONFIG_HPP_
#define FOURSWAP_SRC_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace fsw {

enum class KeyType { kReal, kInt, kBool, kChoice, kList, kText };

struct KeySpec {
  std::string name;
  KeyType type = KeyType::kReal;
  std::string default_value;
  std::string doc;
  std::vector<std::string> choices;  // kChoice only
  // Excluded from the semantic hash (scheduling and output location).
  bool hashed = true;
};

// Every accepted key with its default.
const std::vector<KeySpec>& config_schema();

using ConfigValue =
    std::variant<double, std::int64_t, bool, std::string, std::vector<double>>;

// Parsed key = value configuration. Unknown keys and malformed values raise
// kConfig errors naming the key (and line, when parsed from text).
class RunConfig {
 public:
  RunConfig();  // all defaults
  static RunConfig parse(const std::string& text, const std::string& origin = "<text>");
  static RunConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value);

  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  const std::vector<double>& list(const std::string& key) const;

  // Cross-key checks that must hold before any computation starts.
  void validate() const;

  // One "key = value" line per key, sorted, numbers at full precision.
  std::string canonical(bool hashed_only = true) const;
  // SHA-256 hex digest of canonical(true).
  std::string hash() const;

 private:
  const ConfigValue& get(const std::string& key) const;
  std::map<std::string, ConfigValue> values_;
};

// "a:b:n" (n evenly spaced points), "x1,x2,...", or a single number.
std::vector<double> parse_list(const std::string& text);

std::string sha256_hex(const std::string& data);

}  // namespace fsw

#endif  // FOURSWAP_SRC_CONFIG_HPP_
