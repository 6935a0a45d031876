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

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "doctest.h"
#include "manifest.hpp"

using namespace hybridshape::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;  // stdout and stderr together
};

Run run(const std::string& args) {
  const std::string cmd = std::string(HYBRIDSHAPE_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hybridshape_cli_" + std::to_string(getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

const std::vector<OptionDef> kDefs = {{"alpha", "1", "a"}, {"beta", "x", "b"}, {"gamma", "", "c", true}};

}  // namespace

TEST_CASE("config files parse comments, spacing and dashed keys") {
  TempDir dir;
  write(dir / "c.txt", "# header\n  alpha = 2  \nreg-iters=5 # trailing\n\nname = two words\n");
  const auto m = read_config_file(dir / "c.txt");
  CHECK(m.size() == 3);
  CHECK(m.at("alpha") == "2");
  CHECK(m.at("reg_iters") == "5");
  CHECK(m.at("name") == "two words");
  write(dir / "bad.txt", "alpha 2\n");
  CHECK_THROWS_WITH_AS(read_config_file(dir / "bad.txt"), doctest::Contains(":1:"), UsageError);
  CHECK_THROWS_AS(read_config_file(dir / "missing.txt"), UsageError);
}

TEST_CASE("flags override the config file, which overrides defaults") {
  const auto s = Settings::resolve(kDefs, {{"alpha", "2"}, {"beta", "y"}, {"gamma", "z"}}, {{"alpha", "3"}});
  CHECK(s.str("alpha") == "3");
  CHECK(s.str("beta") == "y");
  CHECK(s.str("gamma") == "z");
  const auto d = Settings::resolve(kDefs, {}, {{"gamma", "g"}});
  CHECK(d.integer("alpha") == 1);
  CHECK_THROWS_WITH_AS(Settings::resolve(kDefs, {}, {}), "--gamma is required", UsageError);
  CHECK_THROWS_WITH_AS(Settings::resolve(kDefs, {{"delta", "1"}}, {{"gamma", "g"}}), "unknown config key: delta",
                       UsageError);
}

TEST_CASE("typed settings reject malformed values") {
  Settings s({{"i", "12"}, {"d", "2.5e-3"}, {"b", "off"}, {"x", "3.5"}, {"neg", "-1"}});
  CHECK(s.integer("i") == 12);
  CHECK(s.real("d") == 2.5e-3);
  CHECK_FALSE(s.flag("b"));
  CHECK_THROWS_AS(s.integer("x"), UsageError);
  CHECK_THROWS_AS(s.u64("neg"), UsageError);
  CHECK_THROWS_AS(s.flag("i"), UsageError);
  CHECK_THROWS_AS(s.real("missing"), UsageError);
}

TEST_CASE("manifests round-trip and are written without temp leftovers") {
  TempDir dir;
  RunManifest m;
  m.command = "gridgen";
  m.config = Settings({{"seed", "4"}, {"out", dir.path.string()}});
  m.inputs = {{"mesh", "a.obj"}};
  m.outputs = {"x.hgrd"};
  m.stage_seconds = {{"gridgen", 0.5}};
  const std::string path = write_manifest(m, dir.path.string());
  CHECK_FALSE(fs::exists(path + ".tmp"));
  const RunManifest back = read_manifest(path);
  CHECK(back.command == "gridgen");
  CHECK(back.config.values() == m.config.values());
  CHECK(back.inputs == m.inputs);
  CHECK(back.outputs == m.outputs);
  write(dir / "broken.json", "{\"command\": 3}");
  CHECK_THROWS_AS(read_manifest(dir / "broken.json"), UsageError);
}

TEST_CASE("every subcommand documents all of its flags") {
  for (const auto& cmd : commands()) {
    const Run r = run(cmd.name + " --help");
    CHECK(r.code == 0);
    for (const auto& def : cmd.options) {
      INFO(cmd.name << " " << flag_name(def.key));
      CHECK(r.out.find(flag_name(def.key) + " ") != std::string::npos);
    }
    CHECK(r.out.find("--config") != std::string::npos);
  }
  const Run r = run("replay --help");
  CHECK(r.code == 0);
  CHECK(r.out.find("--manifest") != std::string::npos);
  CHECK(run("--help").code == 0);
}

TEST_CASE("usage errors exit 1 with usage text") {
  Run r = run("eval --bogus");
  CHECK(r.code == 1);
  CHECK(r.out.find("Usage:") != std::string::npos);
  CHECK(run("").code == 1);
  CHECK(run("nosuchcommand").code == 1);
  r = run("eval --gt a.obj");
  CHECK(r.code == 1);
  CHECK(r.out.find("--pred is required") != std::string::npos);
  CHECK(run("gridgen --fixture sphere --resolution abc --out /tmp/x").code == 1);
}

TEST_CASE("eval of a mesh against itself reports zero distance") {
  TempDir dir;
  REQUIRE(run("gridgen --fixture sphere --resolution 24 --out " + dir / "g").code == 0);
  const Run r = run("eval --samples 5000 --pred " + dir / "g/mesh.obj" + " --gt " + dir / "g/mesh.obj");
  CHECK(r.code == 0);
  CHECK(r.out.find("ASSD,HD90,NC,SI\n0,0,1,0\n") != std::string::npos);
}

TEST_CASE("topofix exits 3 when every offset fails") {
  TempDir dir;
  REQUIRE(run("gridgen --fixture open_torus --resolution 32 --out " + dir / "g").code == 0);
  const Run r = run("topofix --chi " + dir / "g/grid.hgrd" + " --mesh " + dir / "g/mesh.obj" + " --out " + dir / "t");
  CHECK(r.code == 3);
  CHECK(r.out.find("event=error") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "t/manifest.json"));
}

TEST_CASE("stderr events are key=value lines") {
  TempDir dir;
  const Run r = run("gridgen --fixture torus --resolution 24 --out " + dir / "g");
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int events = 0;
  while (std::getline(lines, line)) {
    CHECK(line.rfind("event=", 0) == 0);
    ++events;
  }
  CHECK(events >= 3);
}

TEST_CASE("reconstruct is bit-reproducible and replayable") {
  TempDir dir;
  REQUIRE(run("gridgen --fixture dented_sphere --resolution 48 --out " + dir / "g").code == 0);
  write(dir / "rc.txt", "resolution = 24\niterations = 40\ntarget_samples = 5000\neval_samples = 5000\nlr = 1\n");
  const std::string common = "reconstruct --target " + dir / "g/mesh.obj" + " --config " + dir / "rc.txt" + " --lr 3e-3";
  REQUIRE(run(common + " --out " + dir / "a").code == 0);
  REQUIRE(run(common + " --out " + dir / "b").code == 0);
  REQUIRE(run("replay --manifest " + dir / "a/manifest.json" + " --out " + dir / "c").code == 0);
  for (const char* f : {"target_chi.hgrd", "chi.hgrd", "extracted.obj", "mesh.obj", "loss.csv"}) {
    INFO(f);
    const std::string a = slurp(dir.path / "a" / f);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(dir.path / "b" / f));
    CHECK(a == slurp(dir.path / "c" / f));
  }
  const auto m = read_manifest(dir / "a/manifest.json");
  CHECK(m.config.str("lr") == "3e-3");
  CHECK(m.config.str("resolution") == "24");
  CHECK(m.config.str("sigma") == "2");
}
