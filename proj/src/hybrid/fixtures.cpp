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

#include "hybridshape/hybrid/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hybridshape/error.hpp"
#include "hybridshape/mesh/marching.hpp"
#include "hybridshape/rng.hpp"

namespace hybridshape::fixtures {

using namespace hybridshape::mesh;

double sphere_distance(const mesh::Vec3& p, const mesh::Vec3& center, double radius) {
  return radius - mesh::norm(p - center);
}

double torus_distance(const mesh::Vec3& p, const mesh::Vec3& center, double major, double minor) {
  const mesh::Vec3 q = p - center;
  const double rho = std::hypot(q[0], q[1]) - major;
  return minor - std::hypot(rho, q[2]);
}

field::ScalarGrid sample_grid(int dim, int r, const std::function<double(const double*)>& f) {
  field::ScalarGrid g(dim, r);
  double p[3];
  if (dim == 2) {
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        p[0] = (i + 0.5) / r;
        p[1] = (j + 0.5) / r;
        g[g.index(i, j)] = f(p);
      }
    return g;
  }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k) {
        p[0] = (i + 0.5) / r;
        p[1] = (j + 0.5) / r;
        p[2] = (k + 0.5) / r;
        g[g.index(i, j, k)] = f(p);
      }
  return g;
}

field::ScalarGrid sphere_grid(int r, const mesh::Vec3& center, double radius) {
  return sample_grid(3, r, [&](const double* p) { return sphere_distance({p[0], p[1], p[2]}, center, radius); });
}

field::ScalarGrid torus_grid(int r, const mesh::Vec3& center, double major, double minor) {
  return sample_grid(3, r, [&](const double* p) { return torus_distance({p[0], p[1], p[2]}, center, major, minor); });
}

field::ScalarGrid circle_grid(int r, const mesh::Vec2& center, double radius) {
  return sample_grid(2, r, [&](const double* p) { return radius - std::hypot(p[0] - center[0], p[1] - center[1]); });
}

field::OrientedPointCloud sphere_points(std::size_t count, const mesh::Vec3& center, double radius,
                                        std::uint64_t seed) {
  if (count == 0) throw InvalidArgument("empty point set");
  Rng rng = Rng::derive(seed, 7);
  // Random rotation from a unit quaternion.
  double q[4];
  double len = 0.0;
  do {
    len = 0.0;
    for (double& x : q) {
      x = rng.normal();
      len += x * x;
    }
  } while (len < 1e-12);
  len = std::sqrt(len);
  for (double& x : q) x /= len;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  const double rot[9] = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
                         2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
                         2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y)};
  std::vector<double> pos(3 * count), nrm(3 * count);
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < count; ++i) {
    const double zc = 1.0 - 2.0 * (i + 0.5) / static_cast<double>(count);
    const double rad = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    const double phi = golden * static_cast<double>(i);
    const double u[3] = {rad * std::cos(phi), rad * std::sin(phi), zc};
    for (int k = 0; k < 3; ++k) {
      const double n = rot[3 * k] * u[0] + rot[3 * k + 1] * u[1] + rot[3 * k + 2] * u[2];
      nrm[3 * i + k] = n;
      pos[3 * i + k] = center[k] + radius * n;
    }
  }
  return field::OrientedPointCloud(3, std::move(pos), std::move(nrm));
}

mesh::SurfaceMesh tetrahedron(const mesh::Vec3& a, const mesh::Vec3& b, const mesh::Vec3& c, const mesh::Vec3& d) {
  mesh::SurfaceMesh m;
  m.vertices = {a, b, c, d};
  m.faces = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
  if (mesh::signed_volume(m) < 0.0)
    for (auto& f : m.faces) std::swap(f[1], f[2]);
  return m;
}

mesh::SurfaceMesh box_mesh(const mesh::Vec3& lo, const mesh::Vec3& hi) {
  mesh::SurfaceMesh m;
  for (int c = 0; c < 8; ++c) m.vertices.push_back({c & 4 ? hi[0] : lo[0], c & 2 ? hi[1] : lo[1], c & 1 ? hi[2] : lo[2]});
  // corner bits (x, y, z) = (4, 2, 1)
  const int quads[6][4] = {{0, 1, 3, 2}, {4, 6, 7, 5}, {0, 4, 5, 1}, {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 5, 7, 3}};
  for (const auto& q : quads) {
    m.faces.push_back({q[0], q[1], q[2]});
    m.faces.push_back({q[0], q[2], q[3]});
  }
  return m;
}

mesh::SurfaceMesh sphere_mesh(int r, const mesh::Vec3& center, double radius) {
  return mesh::marching_cubes(sphere_grid(r, center, radius), 0.0);
}

DefectFixture tunnel_fixture(int r, double tunnel_cells) {
  if (r < 16) throw InvalidArgument("tunnel fixture needs resolution >= 16");
  const Vec3 c{0.5, 0.5, 0.5};
  const double rho = tunnel_cells / r;
  DefectFixture out;
  out.chi = sample_grid(3, r, [&](const double* p) {
    const double ball = sphere_distance({p[0], p[1], p[2]}, c, 0.3);
    const double bore = std::hypot(p[0] - c[0], p[1] - c[1]) - rho;
    return std::min(ball, bore);
  });
  const double band = rho + 3.0 / r;
  out.near_defect = [c, band](const Vec3& p) { return std::hypot(p[0] - c[0], p[1] - c[1]) < band; };
  return out;
}

DefectFixture handle_fixture(int r, double tube_cells) {
  if (r < 16) throw InvalidArgument("handle fixture needs resolution >= 16");
  const Vec3 c{0.5, 0.5, 0.5};
  const double ball_r = 0.28, major = 0.1, minor = tube_cells / r;
  const Vec3 top{0.5, 0.5, 0.5 + ball_r};
  DefectFixture out;
  out.chi = sample_grid(3, r, [&](const double* p) {
    const double ball = sphere_distance({p[0], p[1], p[2]}, c, ball_r);
    // ring in the xz plane
    const double q = std::hypot(p[0] - top[0], p[2] - top[2]) - major;
    const double tube = minor - std::hypot(q, p[1] - top[1]);
    return std::max(ball, tube);
  });
  const double reach = major + minor + 3.0 / r;
  out.near_defect = [top, reach](const Vec3& p) { return mesh::norm(p - top) < reach; };
  return out;
}

field::ScalarGrid open_torus_grid(int r) { return torus_grid(r, {0.5, 0.5, 0.5}, 0.25, 0.1); }

mesh::Contour make_polygon_target(int pivots, std::uint64_t seed) {
  if (pivots < 3) throw InvalidArgument("polygon needs at least 3 pivots");
  Rng rng = Rng::derive(seed, 20);
  mesh::Contour c;
  c.loops.emplace_back();
  for (int i = 0; i < pivots; ++i) {
    const double a = 2.0 * M_PI * i / pivots, rad = rng.uniform(0.15, 0.4);
    c.loops[0].push_back({0.5 + rad * std::cos(a), 0.5 + rad * std::sin(a)});
  }
  return c;
}

mesh::Contour make_circle(int n, double radius, const mesh::Vec2& center) {
  if (n < 3) throw InvalidArgument("circle needs at least 3 pivots");
  if (!(radius > 0.0)) throw InvalidArgument("circle radius must be positive");
  mesh::Contour c;
  c.loops.emplace_back();
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    c.loops[0].push_back({center[0] + radius * std::cos(a), center[1] + radius * std::sin(a)});
  }
  return c;
}

double dented_sphere_distance(const mesh::Vec3& p) {
  const double body = sphere_distance(p, {0.5, 0.5, 0.5}, 0.3);
  const double bite = sphere_distance(p, {0.5, 0.5, 0.84}, 0.12);
  return std::min(body, -bite);
}

}  // namespace hybridshape::fixtures
