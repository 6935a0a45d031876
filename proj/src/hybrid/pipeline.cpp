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

#include "hybridshape/hybrid/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "hybridshape/error.hpp"
#include "hybridshape/field/dpsr.hpp"
#include "hybridshape/hybrid/fixtures.hpp"
#include "hybridshape/mesh/marching.hpp"
#include "hybridshape/mesh/sampling.hpp"
#include "hybridshape/rng.hpp"

namespace hybridshape::hybrid {

namespace {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return Rng::derive(seed, stream).next(); }

bool is_sphere_like(const mesh::SurfaceMesh& m) {
  if (m.faces.empty() || !mesh::is_watertight(m)) return false;
  int count = 0;
  mesh::face_components(m, &count);
  return count == 1 && mesh::euler_characteristic(m) == 2;
}

class StageClock {
 public:
  explicit StageClock(std::vector<std::pair<std::string, double>>& out) : out_(out) {}
  void lap(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    out_.emplace_back(name, std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }

 private:
  std::vector<std::pair<std::string, double>>& out_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

TopoMode parse_topo_mode(const std::string& s) {
  if (s == "off") return TopoMode::off;
  if (s == "on") return TopoMode::on;
  if (s == "auto") return TopoMode::automatic;
  throw InvalidArgument("topo mode must be off, on or auto: " + s);
}

std::string to_string(TopoMode mode) {
  switch (mode) {
    case TopoMode::off:
      return "off";
    case TopoMode::on:
      return "on";
    default:
      return "auto";
  }
}

field::OrientedPointCloud sphere_init(const field::OrientedPointCloud& target_samples, std::size_t count,
                                      std::uint64_t seed) {
  if (target_samples.dim() != 3 || target_samples.size() == 0) throw InvalidArgument("expected 3D target samples");
  mesh::Vec3 c{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < target_samples.size(); ++i)
    for (int a = 0; a < 3; ++a) c[a] += target_samples.position(i)[a];
  for (double& x : c) x /= static_cast<double>(target_samples.size());
  double radius = 0.0;
  for (std::size_t i = 0; i < target_samples.size(); ++i) {
    const auto p = target_samples.position(i);
    radius += std::sqrt((p[0] - c[0]) * (p[0] - c[0]) + (p[1] - c[1]) * (p[1] - c[1]) + (p[2] - c[2]) * (p[2] - c[2]));
  }
  radius /= static_cast<double>(target_samples.size());
  if (!(radius > 0.0)) throw InvalidArgument("target samples are degenerate");
  return fixtures::sphere_points(count, c, radius, seed);
}

ReconstructResult reconstruct(const mesh::SurfaceMesh& target, const ReconstructConfig& cfg,
                              const mesh::SurfaceMesh* init) {
  if (target.faces.empty()) throw InvalidArgument("empty target mesh");
  if (cfg.target_samples == 0 || cfg.eval_samples == 0) throw InvalidArgument("sample counts must be positive");
  if (cfg.hybrid.points < 4) throw InvalidArgument("at least 4 points are required");

  ReconstructResult out;
  StageClock clock(out.stage_seconds);
  const field::DpsrParams params{cfg.hybrid.resolution, cfg.hybrid.sigma, cfg.hybrid.m};
  const auto samples = mesh::sample_surface(target, cfg.target_samples, stream_seed(cfg.seed, 40));
  out.target_chi = field::dpsr_forward(samples, params).chi;
  out.init = init ? mesh::sample_surface(*init, cfg.hybrid.points, stream_seed(cfg.seed, 41))
                  : sphere_init(samples, cfg.hybrid.points, stream_seed(cfg.seed, 41));
  clock.lap("target");

  HybridConfig hcfg = cfg.hybrid;
  hcfg.seed = cfg.seed;
  out.hybrid = optimize_oriented_points(out.target_chi, out.init, hcfg);
  clock.lap("optimize");

  out.extracted = mesh::marching_cubes(out.hybrid.chi, 0.0);
  if (out.extracted.faces.empty()) throw NumericalError("optimized indicator has no zero level set");
  clock.lap("extract");

  const bool fix = cfg.topo_mode == TopoMode::on || (cfg.topo_mode == TopoMode::automatic && !is_sphere_like(out.extracted));
  if (fix) {
    topo::TopoConfig tcfg = cfg.topo;
    tcfg.registration.seed = cfg.seed;
    out.topo = topo::correct_topology(out.hybrid.chi, tcfg, out.extracted);
    out.mesh = out.topo->mesh;
  } else {
    out.mesh = out.extracted;
  }
  clock.lap("topofix");

  out.metrics = metrics::evaluate(out.mesh, target, cfg.eval_samples, stream_seed(cfg.seed, 42));
  clock.lap("metrics");
  return out;
}

}  // namespace hybridshape::hybrid
