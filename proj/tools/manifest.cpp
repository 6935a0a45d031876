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

#include "manifest.hpp"

#include <filesystem>
#include <fstream>

#include "hybridshape/parallel.hpp"
#include "hybridshape/version.hpp"

namespace hybridshape::cli {

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["threads"] = thread_count();
  j["config"] = config.values();
  j["seeds"] = nlohmann::json::object();
  if (config.has("seed")) j["seeds"]["seed"] = config.str("seed");
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  nlohmann::json stages = nlohmann::json::object();
  for (const auto& [name, s] : stage_seconds) stages[name] = s;
  j["stage_seconds"] = stages;
  j["results"] = results;
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.config = Settings(j.at("config").get<std::map<std::string, std::string>>());
    if (j.contains("inputs")) m.inputs = j["inputs"].get<std::map<std::string, std::string>>();
    if (j.contains("outputs")) m.outputs = j["outputs"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
  }
  std::filesystem::rename(tmp, path);
}

std::string write_manifest(const RunManifest& m, const std::string& dir) {
  const std::string path = (std::filesystem::path(dir) / "manifest.json").string();
  write_text_atomic(path, m.to_json().dump(2) + "\n");
  return path;
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read manifest: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed manifest: ") + e.what());
  }
  return RunManifest::from_json(j);
}

}  // namespace hybridshape::cli
