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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hybridshape/error.hpp"
#include "hybridshape/hybrid/fixtures.hpp"
#include "hybridshape/mesh/surface_mesh.hpp"
#include "hybridshape/metrics/metrics.hpp"
#include "hybridshape/metrics/nearest.hpp"
#include "hybridshape/rng.hpp"

using namespace hybridshape;
using namespace hybridshape::metrics;
using mesh::SurfaceMesh;
using mesh::Vec3;

namespace {

const Vec3 kCenter{0.5, 0.5, 0.5};

PointSet random_set(int dim, std::size_t n, std::uint64_t seed, bool lattice = false) {
  Rng rng(seed);
  PointSet s;
  s.dim = dim;
  for (std::size_t i = 0; i < n * dim; ++i)
    s.positions.push_back(lattice ? static_cast<double>(rng.below(4)) : rng.uniform());
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    double len = 0.0;
    for (auto& x : v) len += (x = rng.normal()) * x;
    for (auto x : v) s.normals.push_back(x / std::sqrt(len));
  }
  return s;
}

double brute_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

std::size_t brute_nearest(const PointSet& s, std::span<const double> p) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < s.size(); ++j)
    if (brute_sq(p, s.position(j)) < brute_sq(p, s.position(best))) best = j;
  return best;
}

double brute_chamfer(const PointSet& a, const PointSet& b) {
  double total = 0.0;
  for (const auto* pair : {&a, &b}) {
    const PointSet& from = *pair;
    const PointSet& to = pair == &a ? b : a;
    double s = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) s += brute_sq(from.position(i), to.position(brute_nearest(to, from.position(i))));
    total += s / static_cast<double>(from.size());
  }
  return total;
}

double brute_normal_term(const PointSet& a, const PointSet& b, bool distance) {
  double total = 0.0;
  for (const auto* pair : {&a, &b}) {
    const PointSet& from = *pair;
    const PointSet& to = pair == &a ? b : a;
    double s = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
      const auto j = brute_nearest(to, from.position(i));
      double c = 0.0;
      for (int k = 0; k < from.dim; ++k) c += from.normal(i)[k] * to.normal(j)[k];
      s += distance ? 1.0 - std::abs(c) : std::abs(c);
    }
    total += s / static_cast<double>(from.size());
  }
  return 0.5 * total;
}

PointSet moved(const PointSet& s, const std::array<double, 9>& rot, const Vec3& t) {
  PointSet out = s;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (int r = 0; r < 3; ++r) {
      double p = t[r], n = 0.0;
      for (int c = 0; c < 3; ++c) {
        p += rot[3 * r + c] * s.position(i)[c];
        n += rot[3 * r + c] * s.normal(i)[c];
      }
      out.positions[3 * i + r] = p;
      out.normals[3 * i + r] = n;
    }
  return out;
}

std::array<double, 9> rotation(double a, double b) {
  const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b);
  // Rz(a) * Rx(b)
  return {ca, -sa * cb, sa * sb, sa, ca * cb, -ca * sb, 0.0, sb, cb};
}

SurfaceMesh flipped(SurfaceMesh m) {
  for (auto& f : m.faces) std::swap(f[1], f[2]);
  return m;
}

}  // namespace

TEST_CASE("k-d tree agrees with a linear scan") {
  for (int dim : {2, 3})
    for (std::size_t n : {1u, 2u, 7u, 64u, 300u, 512u})
      for (bool lattice : {false, true}) {
        const PointSet pts = random_set(dim, n, 11 * n + dim, lattice);
        const PointSet queries = random_set(dim, 200, 7 * n + dim + 1, lattice);
        const NearestIndex index(pts, 4);
        CHECK(index.size() == n);
        const auto hits = index.query_all(queries);
        for (std::size_t q = 0; q < queries.size(); ++q) {
          const Nearest lin = nearest_linear(pts, queries.position(q));
          CHECK(hits[q].index == lin.index);
          CHECK(hits[q].distance_sq == lin.distance_sq);
          CHECK(lin.index == brute_nearest(pts, queries.position(q)));
        }
      }
}

TEST_CASE("k-d tree payload and errors") {
  const PointSet pts = random_set(3, 50, 3);
  const NearestIndex index(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Nearest h = index.query(pts.position(i));
    CHECK(h.index == i);
    CHECK(h.distance_sq == 0.0);
    CHECK(std::equal(pts.normal(i).begin(), pts.normal(i).end(), index.normal(i).begin()));
  }
  CHECK_THROWS_AS(NearestIndex(PointSet{3, {}, {}}), InvalidArgument);
  const std::vector<double> p2{0.1, 0.2};
  CHECK_THROWS_AS(index.query(p2), InvalidArgument);
}

TEST_CASE("chamfer distance") {
  const PointSet a = random_set(3, 64, 1), b = random_set(3, 64, 2);
  CHECK(chamfer_distance(a, a) == 0.0);

  const PointSet p{2, {0.0, 0.0}, {}}, q{2, {3.0, 4.0}, {}};
  CHECK(chamfer_distance(p, q) == 50.0);
  CHECK(chamfer_distance(p, q, false) == 10.0);

  CHECK(chamfer_distance(a, b) == brute_chamfer(a, b));
  CHECK(chamfer_distance(a, b) == chamfer_distance(b, a));

  CHECK_THROWS_AS(chamfer_distance(a, PointSet{3, {}, {}}), InvalidArgument);
  CHECK_THROWS_AS(chamfer_distance(a, random_set(2, 4, 1)), InvalidArgument);
}

TEST_CASE("normal distance") {
  const PointSet a = random_set(3, 64, 4), b = random_set(3, 80, 5);
  CHECK(normal_distance(a, a) < 1e-15);
  CHECK(normal_distance(a, b) == doctest::Approx(brute_normal_term(a, b, true)).epsilon(1e-14));
  CHECK(normal_distance(a, b) == normal_distance(b, a));

  PointSet turned = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    // any unit vector orthogonal to the original normal
    const auto n = a.normal(i);
    Vec3 u{-n[1], n[0], 0.0};
    const double len = std::hypot(u[0], u[1]);
    for (int k = 0; k < 3; ++k) turned.normals[3 * i + k] = u[k] / len;
  }
  CHECK(normal_distance(a, turned) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(normal_distance(a, PointSet{3, b.positions, {}}), InvalidArgument);
}

TEST_CASE("nearest-rank percentile") {
  std::vector<double> v{10, 9, 8, 7, 6, 5, 4, 3, 2, 1};
  CHECK(percentile(v, 90) == 9);
  CHECK(percentile(v, 100) == 10);
  CHECK(percentile(v, 0) == 1);
  CHECK(percentile(v, 50) == 5);
  CHECK(percentile({4.0}, 37) == 4.0);
  CHECK_THROWS_AS(percentile({}, 50), InvalidArgument);
  CHECK_THROWS_AS(percentile(v, 101), InvalidArgument);
}

TEST_CASE("surface distances on concentric spheres") {
  const SurfaceMesh inner = fixtures::sphere_mesh(96, kCenter, 0.3);
  const SurfaceMesh outer = fixtures::sphere_mesh(96, kCenter, 0.32);
  const std::size_t k = 20000;

  const double d = assd(inner, outer, k, 1);
  CHECK(d == doctest::Approx(0.02).epsilon(0.05));
  const double d2 = assd(inner, outer, 2 * k, 1);
  CHECK(std::abs(d2 - d) / d < 0.02);
  CHECK(assd(outer, inner, k, 1) == d);

  const double h90 = hausdorff_p(inner, outer, 90, k, 1);
  CHECK(h90 == doctest::Approx(0.02).epsilon(0.25));
  CHECK(hausdorff_p(inner, outer, 100, k, 1) >= h90);
  CHECK(hausdorff_p(outer, inner, 90, k, 1) == h90);
}

TEST_CASE("self comparison is bounded by sampling density") {
  const SurfaceMesh m = fixtures::sphere_mesh(48, kCenter, 0.3);
  const std::size_t k = 5000;
  const double spacing = mean_sample_spacing(m, k);
  CHECK(assd(m, m, k, 3) < 2.0 * spacing);
  CHECK(hausdorff_p(m, m, 90, k, 3) < 2.0 * spacing);
  // independent sample sets of the same surface
  const PointSet a = sample_points(m, k, 3), b = sample_points(m, k, 4);
  CHECK(assd(a, b) < 2.0 * spacing);
  CHECK(hausdorff_p(a, b) < 2.0 * spacing);
  CHECK(normal_consistency(a, b) > 0.99);
  CHECK(normal_consistency(m, m, k, 3) > 0.99);
}

TEST_CASE("normal consistency ignores orientation") {
  const SurfaceMesh m = fixtures::sphere_mesh(48, kCenter, 0.3);
  CHECK(normal_consistency(m, flipped(m), 5000, 2) > 0.99);
}

TEST_CASE("normal consistency separates sphere and cube") {
  const SurfaceMesh sphere = fixtures::sphere_mesh(32, kCenter, 0.3);
  const SurfaceMesh cube = fixtures::box_mesh({0.25, 0.25, 0.25}, {0.75, 0.75, 0.75});
  CHECK(mesh::signed_volume(cube) == doctest::Approx(0.125));
  const PointSet a = sample_points(sphere, 400, 9), b = sample_points(cube, 400, 9);
  const double nc = normal_consistency(a, b);
  CHECK(nc == doctest::Approx(brute_normal_term(a, b, false)).epsilon(1e-14));
  CHECK(nc < 0.95);
  CHECK(normal_consistency(sphere, cube, 400, 9) == nc);
}

TEST_CASE("metrics are invariant under rigid motion") {
  const SurfaceMesh a = fixtures::sphere_mesh(32, kCenter, 0.3);
  const SurfaceMesh b = fixtures::box_mesh({0.3, 0.25, 0.2}, {0.7, 0.8, 0.75});
  const auto rot = rotation(0.7, -1.1);
  const Vec3 t{0.3, -2.0, 5.0};
  const SurfaceMesh ma = mesh::transformed(a, rot, t), mb = mesh::transformed(b, rot, t);
  const std::size_t k = 3000;
  CHECK(assd(ma, mb, k, 5) == doctest::Approx(assd(a, b, k, 5)).epsilon(1e-9));
  CHECK(hausdorff_p(ma, mb, 90, k, 5) == doctest::Approx(hausdorff_p(a, b, 90, k, 5)).epsilon(1e-9));
  CHECK(normal_consistency(ma, mb, k, 5) == doctest::Approx(normal_consistency(a, b, k, 5)).epsilon(1e-9));

  const PointSet pa = random_set(3, 200, 1), pb = random_set(3, 150, 2);
  CHECK(chamfer_distance(moved(pa, rot, t), moved(pb, rot, t)) == doctest::Approx(chamfer_distance(pa, pb)).epsilon(1e-9));
  CHECK(normal_distance(moved(pa, rot, t), moved(pb, rot, t)) == doctest::Approx(normal_distance(pa, pb)).epsilon(1e-9));
}

TEST_CASE("evaluation report") {
  const SurfaceMesh a = fixtures::sphere_mesh(48, kCenter, 0.3);
  const SurfaceMesh b = fixtures::sphere_mesh(48, kCenter, 0.32);
  const MetricReport r = evaluate(a, b, 4000, 8);
  CHECK(r.assd == assd(a, b, 4000, 8));
  CHECK(r.hd90 == hausdorff_p(a, b, 90, 4000, 8));
  CHECK(r.nc == normal_consistency(a, b, 4000, 8));
  CHECK(r.si == 0.0);
  CHECK_THROWS_AS(evaluate(SurfaceMesh{}, b, 10, 1), InvalidArgument);
}

TEST_CASE("contour sampling") {
  mesh::Contour c;
  c.loops.emplace_back();
  for (int i = 0; i < 200; ++i) {
    const double a = 2.0 * M_PI * i / 200.0;
    c.loops[0].push_back({0.5 + 0.3 * std::cos(a), 0.5 + 0.3 * std::sin(a)});
  }
  const PointSet s = sample_points(c, 1000, 1);
  CHECK(s.dim == 2);
  CHECK(s.size() == 1000);
  CHECK(mean_sample_spacing(c, 1000) == doctest::Approx(2 * M_PI * 0.3 / 1000).epsilon(1e-3));
  CHECK(chamfer_distance(s, sample_points(c, 1000, 2)) < 1e-4);
}
