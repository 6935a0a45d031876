// Copyright 2026 The HybridShape Authors.
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

#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

namespace hybridshape::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw UsageError("invalid value for " + key + ": '" + text + "'");
  return v;
}

}  // namespace

std::string flag_name(const std::string& key) {
  std::string f = key;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

Settings Settings::resolve(const std::vector<OptionDef>& defs, const std::map<std::string, std::string>& file,
                           const std::map<std::string, std::string>& flags) {
  std::set<std::string> known;
  std::map<std::string, std::string> v;
  for (const auto& d : defs) {
    known.insert(d.key);
    if (!d.fallback.empty()) v[d.key] = d.fallback;
  }
  for (const auto& [k, x] : file) {
    if (!known.count(k)) throw UsageError("unknown config key: " + k);
    v[k] = x;
  }
  for (const auto& [k, x] : flags) v[k] = x;
  for (const auto& d : defs)
    if (d.required && (!v.count(d.key) || v[d.key].empty())) throw UsageError(flag_name(d.key) + " is required");
  return Settings(std::move(v));
}

bool Settings::has(const std::string& key) const {
  const auto it = values_.find(key);
  return it != values_.end() && !it->second.empty();
}

const std::string& Settings::str(const std::string& key) const {
  static const std::string empty;
  const auto it = values_.find(key);
  return it == values_.end() ? empty : it->second;
}

int Settings::integer(const std::string& key) const { return parse_number<int>(key, str(key)); }

std::uint64_t Settings::u64(const std::string& key) const { return parse_number<std::uint64_t>(key, str(key)); }

std::size_t Settings::count(const std::string& key) const { return parse_number<std::size_t>(key, str(key)); }

double Settings::real(const std::string& key) const { return parse_number<double>(key, str(key)); }

bool Settings::flag(const std::string& key) const {
  const std::string& s = str(key);
  if (s == "1" || s == "true" || s == "on" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "off" || s == "no") return false;
  throw UsageError("invalid boolean for " + key + ": '" + s + "'");
}

}  // namespace hybridshape::cli
