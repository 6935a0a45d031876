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

#include "hybridshape/hybrid/toy.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <fstream>

#include "hybridshape/error.hpp"
#include "hybridshape/field/dpsr.hpp"
#include "hybridshape/hybrid/fixtures.hpp"
#include "hybridshape/mesh/marching.hpp"
#include "hybridshape/mesh/mesh_io.hpp"
#include "hybridshape/mesh/sampling.hpp"
#include "hybridshape/rng.hpp"

namespace hybridshape::hybrid {

namespace {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return Rng::derive(seed, stream).next(); }

double contour_chamfer(const mesh::Contour& a, const mesh::Contour& b, std::size_t samples, std::uint64_t seed) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return flow::shape_chamfer(flow::to_shape(a), flow::to_shape(b), samples, seed);
}

// Evenly spaced samples at edge midpoints of a uniform subdivision, with edge normals.
field::OrientedPointCloud even_samples(const mesh::Contour& contour, double spacing) {
  std::vector<double> pos, nrm;
  for (const auto& loop : contour.loops)
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const auto& a = loop[i];
      const auto& b = loop[(i + 1) % loop.size()];
      const double dx = b[0] - a[0], dy = b[1] - a[1], len = std::hypot(dx, dy);
      if (len == 0.0) continue;
      const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
      for (int k = 0; k < n; ++k) {
        const double t = (k + 0.5) / n;
        pos.insert(pos.end(), {a[0] + t * dx, a[1] + t * dy});
        nrm.insert(nrm.end(), {dy / len, -dx / len});
      }
    }
  return field::OrientedPointCloud(2, std::move(pos), std::move(nrm));
}

// Small diamonds so points show up in a path-only SVG.
mesh::Contour point_marks(const field::OrientedPointCloud& cloud, double size) {
  mesh::Contour c;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.position(i);
    c.loops.push_back({{p[0] + size, p[1]}, {p[0], p[1] + size}, {p[0] - size, p[1]}, {p[0], p[1] - size}});
  }
  return c;
}

void write_losses(const std::string& path, const std::vector<double>& losses) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    out.precision(17);
    out << "iteration,loss\n";
    for (std::size_t i = 0; i < losses.size(); ++i) out << i << ',' << losses[i] << '\n';
    if (!out) throw InvalidArgument("write failed: " + path);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

HybridConfig ToyConfig::default_hybrid() {
  HybridConfig h;
  h.resolution = 128;
  h.edge_weighting = false;
  return h;
}

flow::RegistrationConfig ToyConfig::default_flow() {
  flow::RegistrationConfig f;
  f.iterations = 3000;
  f.lr = 1e-4;
  f.samples = 1000;
  f.normal_weight = 0.02;
  return f;
}

ToyResult run_toy2d(const ToyConfig& cfg) {
  if (cfg.hybrid.points < 4 || !(cfg.target_spacing > 0.0) || cfg.eval_samples == 0)
    throw InvalidArgument("invalid toy sampling config");
  ToyResult out;
  out.target = fixtures::make_polygon_target(cfg.polygon_pivots, cfg.seed);
  out.source = fixtures::make_circle(cfg.circle_pivots, cfg.circle_radius);
  const std::uint64_t eval_seed = stream_seed(cfg.seed, 30);

  DeformBaselineConfig bcfg = cfg.baseline;
  bcfg.seed = cfg.seed;
  out.baseline = deform_baseline_2d(out.target, out.source, bcfg);
  out.baseline_chamfer = contour_chamfer(out.baseline.contour, out.target, cfg.eval_samples, eval_seed);

  if (cfg.run_flow) {
    flow::RegistrationConfig fcfg = cfg.flow;
    fcfg.seed = cfg.seed;
    out.flow = flow::register_surfaces(out.source, out.target, fcfg);
    out.flow_contour = flow::to_contour(out.flow->deformed);
    out.flow_chamfer = contour_chamfer(out.flow_contour, out.target, cfg.eval_samples, eval_seed);
  }

  const field::DpsrParams params{cfg.hybrid.resolution, cfg.hybrid.sigma, cfg.hybrid.m};
  const auto gt_points = even_samples(out.target, cfg.target_spacing / cfg.hybrid.resolution);
  out.target_chi = field::dpsr_forward(gt_points, params).chi;
  out.hybrid_init = mesh::sample_surface(out.baseline.contour, cfg.hybrid.points, stream_seed(cfg.seed, 32));
  out.hybrid = optimize_oriented_points(out.target_chi, out.hybrid_init, cfg.hybrid);
  out.hybrid_contour = mesh::marching_squares(out.hybrid.chi, 0.0);
  out.hybrid_chamfer = contour_chamfer(out.hybrid_contour, out.target, cfg.eval_samples, eval_seed);
  return out;
}

std::vector<std::string> write_toy_outputs(const ToyResult& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  auto svg = [&](const std::string& name, std::vector<mesh::SvgLayer> layers) {
    const std::string path = dir + "/" + name;
    mesh::write_svg(layers, path);
    paths.push_back(path);
  };
  const mesh::SvgLayer target{r.target, "#1f4e9e", 2.0, false};
  svg("panel_a.svg", {target, {r.source, "#c0392b", 1.5, true}});
  svg("panel_d.svg", {target, {r.baseline.contour, "#c0392b", 1.5, false}});
  svg("panel_e.svg", {target, {point_marks(r.hybrid_init, 0.003), "#27ae60", 1.0, false}});
  if (r.flow) svg("panel_f.svg", {target, {r.flow_contour, "#8e44ad", 1.5, false}});
  svg("panel_g.svg", {target, {r.hybrid_contour, "#27ae60", 1.5, false}});

  auto csv = [&](const std::string& name, const std::vector<double>& losses) {
    const std::string path = dir + "/" + name;
    write_losses(path, losses);
    paths.push_back(path);
  };
  csv("loss_baseline.csv", r.baseline.losses);
  if (r.flow) csv("loss_flow.csv", r.flow->losses);
  csv("loss_hybrid.csv", r.hybrid.losses);
  return paths;
}

}  // namespace hybridshape::hybrid
