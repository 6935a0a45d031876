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

#include "hybridshape/flow/shape.hpp"

#include <algorithm>
#include <cmath>

#include "hybridshape/error.hpp"
#include "hybridshape/rng.hpp"

namespace hybridshape::flow {

namespace {

using V3 = std::array<double, 3>;

V3 vertex3(const Shape& s, int i) { return {s.vertices[3 * i], s.vertices[3 * i + 1], s.vertices[3 * i + 2]}; }

V3 sub(const V3& a, const V3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

V3 cross(const V3& a, const V3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Unnormalized normal: cross product of the edges in 3D, (dy, -dx) in 2D.
std::vector<double> raw_normal(const Shape& s, std::size_t e) {
  const int* v = &s.elements[e * s.dim];
  if (s.dim == 3) {
    const V3 a = vertex3(s, v[0]);
    const V3 u = cross(sub(vertex3(s, v[1]), a), sub(vertex3(s, v[2]), a));
    return {u[0], u[1], u[2]};
  }
  const double dx = s.vertices[2 * v[1]] - s.vertices[2 * v[0]];
  const double dy = s.vertices[2 * v[1] + 1] - s.vertices[2 * v[0] + 1];
  return {dy, -dx};
}

double length(const std::vector<double>& u) {
  double s = 0.0;
  for (double x : u) s += x * x;
  return std::sqrt(s);
}

// Adds the vertex gradient of <nbar, normal(e)>.
void normal_vjp(const Shape& s, std::size_t e, const double* nbar, std::vector<double>& grad) {
  const std::vector<double> u = raw_normal(s, e);
  const double len = length(u);
  if (len == 0.0) return;
  double dot = 0.0;
  for (int k = 0; k < s.dim; ++k) dot += nbar[k] * u[k] / len;
  std::vector<double> ubar(s.dim);
  for (int k = 0; k < s.dim; ++k) ubar[k] = (nbar[k] - dot * u[k] / len) / len;
  const int* v = &s.elements[e * s.dim];
  if (s.dim == 3) {
    const V3 a = vertex3(s, v[0]);
    const V3 e1 = sub(vertex3(s, v[1]), a), e2 = sub(vertex3(s, v[2]), a);
    const V3 ub{ubar[0], ubar[1], ubar[2]};
    const V3 g1 = cross(e2, ub), g2 = cross(ub, e1);
    for (int k = 0; k < 3; ++k) {
      grad[3 * v[0] + k] -= g1[k] + g2[k];
      grad[3 * v[1] + k] += g1[k];
      grad[3 * v[2] + k] += g2[k];
    }
  } else {
    const double gx = -ubar[1], gy = ubar[0];
    grad[2 * v[0]] -= gx;
    grad[2 * v[0] + 1] -= gy;
    grad[2 * v[1]] += gx;
    grad[2 * v[1] + 1] += gy;
  }
}

}  // namespace

Shape to_shape(const mesh::SurfaceMesh& m) {
  m.validate();
  Shape s;
  s.dim = 3;
  for (const auto& v : m.vertices) s.vertices.insert(s.vertices.end(), v.begin(), v.end());
  for (const auto& f : m.faces) s.elements.insert(s.elements.end(), f.begin(), f.end());
  return s;
}

Shape to_shape(const mesh::Contour& c) {
  Shape s;
  s.dim = 2;
  for (const auto& loop : c.loops) {
    if (loop.size() < 2) throw InvalidArgument("contour loop needs at least two points");
    const int base = static_cast<int>(s.vertex_count());
    const int n = static_cast<int>(loop.size());
    for (const auto& p : loop) s.vertices.insert(s.vertices.end(), p.begin(), p.end());
    for (int i = 0; i < n; ++i) {
      s.elements.push_back(base + i);
      s.elements.push_back(base + (i + 1) % n);
    }
    s.loop_sizes.push_back(n);
  }
  return s;
}

mesh::SurfaceMesh to_mesh(const Shape& s) {
  if (s.dim != 3) throw InvalidArgument("shape is not a surface");
  mesh::SurfaceMesh m;
  for (std::size_t i = 0; i < s.vertex_count(); ++i) m.vertices.push_back(vertex3(s, static_cast<int>(i)));
  for (std::size_t e = 0; e < s.element_count(); ++e)
    m.faces.push_back({s.elements[3 * e], s.elements[3 * e + 1], s.elements[3 * e + 2]});
  return m;
}

mesh::Contour to_contour(const Shape& s) {
  if (s.dim != 2) throw InvalidArgument("shape is not a contour");
  mesh::Contour c;
  std::size_t at = 0;
  for (int n : s.loop_sizes) {
    auto& loop = c.loops.emplace_back();
    for (int i = 0; i < n; ++i, ++at) loop.push_back({s.vertices[2 * at], s.vertices[2 * at + 1]});
  }
  return c;
}

double element_measure(const Shape& s, std::size_t e) {
  const double len = length(raw_normal(s, e));
  return s.dim == 3 ? 0.5 * len : len;
}

std::vector<double> element_normal(const Shape& s, std::size_t e) {
  std::vector<double> u = raw_normal(s, e);
  const double len = length(u);
  for (auto& x : u) x = len > 0.0 ? x / len : 0.0;
  return u;
}

ShapeSamples sample_shape(const Shape& s, std::size_t count, std::uint64_t seed) {
  if (s.dim != 2 && s.dim != 3) throw InvalidArgument("shape dimension must be 2 or 3");
  std::vector<double> cumulative(s.element_count());
  double total = 0.0;
  for (std::size_t e = 0; e < cumulative.size(); ++e) cumulative[e] = total += element_measure(s, e);
  if (!(total > 0.0)) throw InvalidArgument("empty surface");
  Rng rng = Rng::derive(seed, 1);
  ShapeSamples out;
  out.dim = s.dim;
  out.element.resize(count);
  out.weights.resize(count * s.dim);
  for (std::size_t i = 0; i < count; ++i) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), rng.uniform() * total);
    out.element[i] = static_cast<int>(std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1));
    double* w = &out.weights[i * s.dim];
    if (s.dim == 3) {
      const double r1 = std::sqrt(rng.uniform()), r2 = rng.uniform();
      w[1] = r1 * (1.0 - r2);
      w[2] = r1 * r2;
      w[0] = 1.0 - w[1] - w[2];
    } else {
      w[1] = rng.uniform();
      w[0] = 1.0 - w[1];
    }
  }
  return out;
}

metrics::PointSet sample_points(const Shape& s, const ShapeSamples& samples) {
  const int d = s.dim;
  metrics::PointSet out;
  out.dim = d;
  out.positions.assign(samples.size() * d, 0.0);
  out.normals.resize(samples.size() * d);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const int* v = &s.elements[static_cast<std::size_t>(samples.element[i]) * d];
    for (int c = 0; c < d; ++c)
      for (int k = 0; k < d; ++k) out.positions[i * d + k] += samples.weights[i * d + c] * s.vertices[v[c] * d + k];
    const auto n = element_normal(s, samples.element[i]);
    std::copy(n.begin(), n.end(), out.normals.begin() + i * d);
  }
  return out;
}

SampleLoss sample_loss(const Shape& moving, const ShapeSamples& samples, const metrics::PointSet& target,
                       const metrics::NearestIndex& target_index, double normal_weight) {
  const int d = moving.dim;
  if (target.dim != d || target_index.dim() != d) throw InvalidArgument("target dimension mismatch");
  if (samples.size() == 0 || target.empty()) throw InvalidArgument("empty sample set");
  const metrics::PointSet x = sample_points(moving, samples);
  const metrics::NearestIndex x_index(x);
  const auto fwd = target_index.query_all(x);
  const auto bwd = x_index.query_all(target);
  const double inv_s = 1.0 / static_cast<double>(x.size()), inv_t = 1.0 / static_cast<double>(target.size());
  const bool with_normals = normal_weight != 0.0;

  SampleLoss out;
  std::vector<double> xbar(x.positions.size(), 0.0), nbar(with_normals ? x.normals.size() : 0, 0.0);
  double cd_a = 0.0, cd_b = 0.0, nd_a = 0.0, nd_b = 0.0;
  const auto dot = [d](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += a[k] * b[k];
    return s;
  };
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t j = fwd[i].index;
    cd_a += fwd[i].distance_sq;
    for (int k = 0; k < d; ++k) xbar[i * d + k] += 2.0 * inv_s * (x.positions[i * d + k] - target.positions[j * d + k]);
    if (with_normals) {
      const double c = dot(x.normal(i), target.normal(j));
      nd_a += 1.0 - std::abs(c);
      const double sg = c < 0.0 ? -1.0 : 1.0;
      for (int k = 0; k < d; ++k) nbar[i * d + k] -= normal_weight * 0.5 * inv_s * sg * target.normals[j * d + k];
    }
  }
  for (std::size_t j = 0; j < target.size(); ++j) {
    const std::size_t i = bwd[j].index;
    cd_b += bwd[j].distance_sq;
    for (int k = 0; k < d; ++k) xbar[i * d + k] += 2.0 * inv_t * (x.positions[i * d + k] - target.positions[j * d + k]);
    if (with_normals) {
      const double c = dot(x.normal(i), target.normal(j));
      nd_b += 1.0 - std::abs(c);
      const double sg = c < 0.0 ? -1.0 : 1.0;
      for (int k = 0; k < d; ++k) nbar[i * d + k] -= normal_weight * 0.5 * inv_t * sg * target.normals[j * d + k];
    }
  }
  out.chamfer = cd_a * inv_s + cd_b * inv_t;
  out.normal = with_normals ? 0.5 * (nd_a * inv_s + nd_b * inv_t) : 0.0;
  out.total = out.chamfer + normal_weight * out.normal;

  out.vertex_grad.assign(moving.vertices.size(), 0.0);
  std::vector<double> element_nbar(with_normals ? moving.element_count() * d : 0, 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::size_t e = samples.element[i];
    const int* v = &moving.elements[e * d];
    for (int c = 0; c < d; ++c)
      for (int k = 0; k < d; ++k) out.vertex_grad[v[c] * d + k] += samples.weights[i * d + c] * xbar[i * d + k];
    if (with_normals)
      for (int k = 0; k < d; ++k) element_nbar[e * d + k] += nbar[i * d + k];
  }
  if (with_normals)
    for (std::size_t e = 0; e < moving.element_count(); ++e) normal_vjp(moving, e, &element_nbar[e * d], out.vertex_grad);
  return out;
}

}  // namespace hybridshape::flow
