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

#include "hybridshape/hybrid/baseline.hpp"

#include <array>
#include <cmath>
#include <string>

#include "hybridshape/error.hpp"
#include "hybridshape/flow/integrate.hpp"
#include "hybridshape/flow/registration.hpp"
#include "hybridshape/rng.hpp"

namespace hybridshape::hybrid {

namespace {

constexpr std::uint64_t kEvalStream = 0x5eed;

void require_contour(const flow::Shape& s) {
  if (s.dim != 2) throw InvalidArgument("expected a 2D contour");
  if (s.element_count() == 0) throw InvalidArgument("empty contour");
}

// Edge e = (a, b); vector b - a.
std::array<double, 2> edge_vector(const flow::Shape& s, std::size_t e) {
  const int a = s.elements[2 * e], b = s.elements[2 * e + 1];
  return {s.vertices[2 * b] - s.vertices[2 * a], s.vertices[2 * b + 1] - s.vertices[2 * a + 1]};
}

void add_edge_grad(const flow::Shape& s, std::size_t e, const std::array<double, 2>& g, std::vector<double>& out) {
  const int a = s.elements[2 * e], b = s.elements[2 * e + 1];
  out[2 * b] += g[0];
  out[2 * b + 1] += g[1];
  out[2 * a] -= g[0];
  out[2 * a + 1] -= g[1];
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return Rng::derive(seed, stream).next(); }

}  // namespace

RegularizerLoss edge_length_loss(const flow::Shape& s) {
  require_contour(s);
  const std::size_t m = s.element_count();
  std::vector<double> len(m);
  double mean = 0.0;
  for (std::size_t e = 0; e < m; ++e) {
    const auto v = edge_vector(s, e);
    len[e] = std::hypot(v[0], v[1]);
    mean += len[e];
  }
  mean /= static_cast<double>(m);
  RegularizerLoss out;
  out.vertex_grad.assign(s.vertices.size(), 0.0);
  for (std::size_t e = 0; e < m; ++e) {
    const double dev = len[e] - mean;
    out.value += dev * dev;
    if (len[e] == 0.0) continue;
    // the mean term drops out since deviations sum to zero
    const double c = 2.0 * dev / (static_cast<double>(m) * len[e]);
    const auto v = edge_vector(s, e);
    add_edge_grad(s, e, {c * v[0], c * v[1]}, out.vertex_grad);
  }
  out.value /= static_cast<double>(m);
  return out;
}

RegularizerLoss normal_consistency_loss(const flow::Shape& s) {
  require_contour(s);
  const std::size_t m = s.element_count();
  std::vector<std::array<double, 2>> unit(m), nrm(m);
  std::vector<double> len(m);
  for (std::size_t e = 0; e < m; ++e) {
    const auto v = edge_vector(s, e);
    len[e] = std::hypot(v[0], v[1]);
    if (len[e] == 0.0) throw NumericalError("degenerate contour edge");
    unit[e] = {v[0] / len[e], v[1] / len[e]};
    nrm[e] = {unit[e][1], -unit[e][0]};
  }
  std::vector<std::array<double, 2>> nbar(m, {0.0, 0.0});
  RegularizerLoss out;
  std::size_t pairs = 0, first = 0;
  for (int size : s.loop_sizes) {
    for (int k = 0; k < size; ++k) {
      const std::size_t e = first + k, f = first + (k + 1) % size;
      out.value += 1.0 - (nrm[e][0] * nrm[f][0] + nrm[e][1] * nrm[f][1]);
      nbar[e][0] -= nrm[f][0];
      nbar[e][1] -= nrm[f][1];
      nbar[f][0] -= nrm[e][0];
      nbar[f][1] -= nrm[e][1];
      ++pairs;
    }
    first += size;
  }
  const double inv = 1.0 / static_cast<double>(pairs);
  out.value *= inv;
  out.vertex_grad.assign(s.vertices.size(), 0.0);
  for (std::size_t e = 0; e < m; ++e) {
    // n = R u with R = [[0, 1], [-1, 0]]; ubar = R^T nbar; vbar = (I - u u^T) ubar / |v|
    const double ub[2] = {-nbar[e][1] * inv, nbar[e][0] * inv};
    const double along = ub[0] * unit[e][0] + ub[1] * unit[e][1];
    add_edge_grad(s, e, {(ub[0] - along * unit[e][0]) / len[e], (ub[1] - along * unit[e][1]) / len[e]},
                  out.vertex_grad);
  }
  return out;
}

DeformResult deform_baseline_2d(const mesh::Contour& target, const mesh::Contour& source,
                                const DeformBaselineConfig& cfg) {
  const flow::Shape src = flow::to_shape(source), tgt = flow::to_shape(target);
  require_contour(src);
  require_contour(tgt);
  const auto& w = cfg.weights;
  if (w.cd < 0.0 || w.nd < 0.0 || w.edge < 0.0 || w.nc < 0.0) throw InvalidArgument("loss weights must be nonnegative");
  if (!(cfg.lr > 0.0) || cfg.iterations < 0 || cfg.samples == 0) throw InvalidArgument("invalid baseline config");

  flow::FieldConfig fc = cfg.field;
  fc.dim = 2;
  fc.seed = cfg.seed;
  flow::VelocityField field(fc);
  const std::size_t nv = src.vertices.size();
  std::vector<double> disp(nv), pgrad(field.parameter_count());
  flow::Shape moving = src;
  auto deform = [&] {
    field.evaluate(src.vertices, disp);
    for (std::size_t i = 0; i < nv; ++i) moving.vertices[i] = src.vertices[i] + disp[i];
  };

  DeformResult out;
  const std::uint64_t eval_seed = stream_seed(cfg.seed, kEvalStream);
  out.initial_chamfer = flow::shape_chamfer(src, tgt, cfg.samples, eval_seed);
  flow::AdamState adam;
  for (int it = 0; it < cfg.iterations; ++it) {
    deform();
    // the two contours are sampled independently
    const auto tgt_samples =
        flow::sample_points(tgt, flow::sample_shape(tgt, cfg.samples, stream_seed(cfg.seed, 2 * it + 100)));
    const metrics::NearestIndex tgt_index(tgt_samples);
    const auto mov_samples = flow::sample_shape(moving, cfg.samples, stream_seed(cfg.seed, 2 * it + 101));

    std::vector<double> vgrad(nv, 0.0);
    double total = 0.0;
    if (w.cd > 0.0) {
      const auto geo = flow::sample_loss(moving, mov_samples, tgt_samples, tgt_index, w.nd / w.cd);
      total += w.cd * geo.total;
      for (std::size_t i = 0; i < nv; ++i) vgrad[i] += w.cd * geo.vertex_grad[i];
    } else if (w.nd > 0.0) {
      const auto with = flow::sample_loss(moving, mov_samples, tgt_samples, tgt_index, 1.0);
      const auto without = flow::sample_loss(moving, mov_samples, tgt_samples, tgt_index, 0.0);
      total += w.nd * with.normal;
      for (std::size_t i = 0; i < nv; ++i) vgrad[i] += w.nd * (with.vertex_grad[i] - without.vertex_grad[i]);
    }
    if (w.edge > 0.0) {
      const auto reg = edge_length_loss(moving);
      total += w.edge * reg.value;
      for (std::size_t i = 0; i < nv; ++i) vgrad[i] += w.edge * reg.vertex_grad[i];
    }
    if (w.nc > 0.0) {
      const auto reg = normal_consistency_loss(moving);
      total += w.nc * reg.value;
      for (std::size_t i = 0; i < nv; ++i) vgrad[i] += w.nc * reg.vertex_grad[i];
    }
    if (!std::isfinite(total)) throw NumericalError("baseline diverged at iteration " + std::to_string(it));
    out.losses.push_back(total);
    if (cfg.on_iteration) cfg.on_iteration(it, total);

    std::fill(pgrad.begin(), pgrad.end(), 0.0);
    field.vjp(src.vertices, vgrad, {}, pgrad);
    flow::adam_step(field.parameters(), pgrad, adam, cfg.lr);
  }
  deform();
  for (double x : moving.vertices)
    if (!std::isfinite(x)) throw NumericalError("baseline diverged at iteration " + std::to_string(cfg.iterations));
  out.contour = flow::to_contour(moving);
  out.final_chamfer = flow::shape_chamfer(moving, tgt, cfg.samples, eval_seed);
  return out;
}

}  // namespace hybridshape::hybrid
