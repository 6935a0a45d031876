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

#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "manifest.hpp"

namespace hybridshape::cli {

struct Command {
  std::string name;
  std::string summary;
  std::vector<OptionDef> options;
  // Fills the manifest's outputs, timings and results; returns normally on success.
  std::function<void(const Settings&, RunManifest&)> run;
  bool writes_manifest = true;
};

const std::vector<Command>& commands();
const Command* find_command(const std::string& name);

// Runs a resolved command, writes its manifest, maps errors to exit codes.
int execute(const Command& cmd, const Settings& settings);

}  // namespace hybridshape::cli
