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

#include "hybridshape/mesh/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "hybridshape/error.hpp"
#include "hybridshape/rng.hpp"

namespace hybridshape::mesh {

namespace {

std::size_t pick(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * cumulative.back());
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

}  // namespace

std::vector<FaceSample> sample_faces(const SurfaceMesh& mesh, std::size_t count, std::uint64_t seed) {
  if (mesh.faces.empty()) throw InvalidArgument("empty surface");
  mesh.validate();
  std::vector<double> cumulative(mesh.faces.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) cumulative[i] = total += face_area(mesh, i);
  if (!(total > 0.0)) throw InvalidArgument("empty surface");
  Rng rng = Rng::derive(seed, 1);
  std::vector<FaceSample> out(count);
  for (auto& s : out) {
    s.face = static_cast<int>(pick(cumulative, rng.uniform()));
    const double r1 = std::sqrt(rng.uniform()), r2 = rng.uniform();
    s.w1 = r1 * (1.0 - r2);
    s.w2 = r1 * r2;
  }
  return out;
}

Vec3 sample_position(const SurfaceMesh& mesh, const FaceSample& s) {
  const auto& f = mesh.faces[s.face];
  return s.w0() * mesh.vertices[f[0]] + s.w1 * mesh.vertices[f[1]] + s.w2 * mesh.vertices[f[2]];
}

field::OrientedPointCloud sample_surface(const SurfaceMesh& mesh, std::size_t count, std::uint64_t seed) {
  const auto samples = sample_faces(mesh, count, seed);
  std::vector<double> pos(3 * count), nrm(3 * count);
  for (std::size_t i = 0; i < count; ++i) {
    const Vec3 p = sample_position(mesh, samples[i]);
    const Vec3 n = face_normal(mesh, samples[i].face);
    for (int k = 0; k < 3; ++k) {
      pos[3 * i + k] = p[k];
      nrm[3 * i + k] = n[k];
    }
  }
  return field::OrientedPointCloud(3, std::move(pos), std::move(nrm));
}

field::OrientedPointCloud sample_surface(const Contour& contour, std::size_t count, std::uint64_t seed) {
  std::vector<Vec2> a, b;
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& loop : contour.loops)
    for (std::size_t i = 0; i < loop.size(); ++i) {
      a.push_back(loop[i]);
      b.push_back(loop[(i + 1) % loop.size()]);
      cumulative.push_back(total += norm(b.back() - a.back()));
    }
  if (!(total > 0.0)) throw InvalidArgument("empty surface");
  Rng rng = Rng::derive(seed, 1);
  std::vector<double> pos(2 * count), nrm(2 * count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t e = pick(cumulative, rng.uniform());
    const double t = rng.uniform();
    const Vec2 d = b[e] - a[e];
    const Vec2 p = a[e] + t * d;
    const double len = norm(d);
    pos[2 * i] = p[0];
    pos[2 * i + 1] = p[1];
    nrm[2 * i] = d[1] / len;
    nrm[2 * i + 1] = -d[0] / len;
  }
  return field::OrientedPointCloud(2, std::move(pos), std::move(nrm));
}

}  // namespace hybridshape::mesh
