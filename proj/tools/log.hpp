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

#include <iostream>
#include <sstream>
#include <string>

namespace hybridshape::cli {

// One event per line on stderr: event=<name> key=value ...
class Event {
 public:
  explicit Event(const std::string& name) { line_ << "event=" << name; }
  Event(const Event&) = delete;
  Event& operator=(const Event&) = delete;
  ~Event() { std::cerr << line_.str() << '\n'; }

  template <typename T>
  Event& kv(const std::string& key, const T& value) {
    line_ << ' ' << key << '=' << value;
    return *this;
  }

  Event& kv(const std::string& key, const std::string& value) {
    line_ << ' ' << key << '=';
    if (value.find_first_of(" \t\"") == std::string::npos && !value.empty())
      line_ << value;
    else
      line_ << '"' << value << '"';
    return *this;
  }

  Event& kv(const std::string& key, const char* value) { return kv(key, std::string(value)); }

 private:
  std::ostringstream line_;
};

}  // namespace hybridshape::cli
