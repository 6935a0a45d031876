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

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybridshape::cli {

// Bad flags, bad config values, missing inputs. Exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OptionDef {
  std::string key;  // config-file name; the flag is --key with '_' -> '-'
  std::string fallback;
  std::string help;
  bool required = false;
};

std::string flag_name(const std::string& key);

// Parses "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

class Settings {
 public:
  Settings() = default;
  explicit Settings(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  // defaults < config file < explicit flags
  static Settings resolve(const std::vector<OptionDef>& defs, const std::map<std::string, std::string>& file,
                          const std::map<std::string, std::string>& flags);

  bool has(const std::string& key) const;
  const std::string& str(const std::string& key) const;
  int integer(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace hybridshape::cli
