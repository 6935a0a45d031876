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

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "hybridshape/version.hpp"
#include "log.hpp"
#include "manifest.hpp"

using namespace hybridshape::cli;

namespace {

struct Bound {
  const Command* cmd = nullptr;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> storage;
  std::map<std::string, CLI::Option*> options;
  std::string config;
};

int usage_error(const CLI::App& app, const std::string& msg) {
  Event("error").kv("kind", "usage").kv("message", msg).kv("exit", 1);
  std::cerr << app.help();
  return 1;
}

int replay(const std::string& manifest_path, const std::string& out) {
  RunManifest m = read_manifest(manifest_path);
  const Command* cmd = find_command(m.command);
  if (!cmd) throw UsageError("manifest names an unknown command: " + m.command);
  Settings s = m.config;
  if (!out.empty()) s.set("out", out);
  Event("replay").kv("manifest", manifest_path).kv("command", m.command);
  return execute(*cmd, s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid explicit/implicit shape reconstruction", "hybridshape"};
  app.set_version_flag("--version", std::string(hybridshape::kVersion));
  app.require_subcommand(1);

  std::vector<Bound> bound(commands().size());
  for (std::size_t i = 0; i < commands().size(); ++i) {
    const Command& cmd = commands()[i];
    Bound& b = bound[i];
    b.cmd = &cmd;
    b.app = app.add_subcommand(cmd.name, cmd.summary);
    b.app->add_option("--config", b.config, "key = value config file (flags override it)");
    for (const auto& def : cmd.options) {
      std::string help = def.help;
      if (!def.fallback.empty()) help += " [default: " + def.fallback + "]";
      if (def.required) help += " (required)";
      b.options[def.key] = b.app->add_option(flag_name(def.key), b.storage[def.key], help);
    }
  }

  std::string manifest_path, replay_out;
  CLI::App* rep = app.add_subcommand("replay", "re-run a command from its manifest.json");
  rep->add_option("--manifest", manifest_path, "manifest written by an earlier run")->required();
  rep->add_option("--out", replay_out, "output directory (default: the recorded one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << hybridshape::kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    const CLI::App* failing = &app;
    for (const auto* sub : app.get_subcommands()) failing = sub;
    return usage_error(*failing, e.what());
  }

  try {
    if (rep->parsed()) return replay(manifest_path, replay_out);
    for (auto& b : bound) {
      if (!b.app->parsed()) continue;
      std::map<std::string, std::string> flags;
      for (const auto& [key, opt] : b.options)
        if (opt->count() > 0) flags[key] = b.storage[key];
      const auto file = b.config.empty() ? std::map<std::string, std::string>{} : read_config_file(b.config);
      Settings s;
      try {
        s = Settings::resolve(b.cmd->options, file, flags);
      } catch (const UsageError& e) {
        return usage_error(*b.app, e.what());
      }
      return execute(*b.cmd, s);
    }
  } catch (const UsageError& e) {
    Event("error").kv("kind", "usage").kv("message", e.what()).kv("exit", 1);
    return 1;
  }
  return 1;
}
