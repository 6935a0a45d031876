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
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "hybridshape/error.hpp"
#include "hybridshape/hybrid/fixtures.hpp"
#include "hybridshape/mesh/intersect.hpp"
#include "hybridshape/mesh/marching.hpp"
#include "hybridshape/metrics/metrics.hpp"
#include "hybridshape/rng.hpp"
#include "hybridshape/topo/topology.hpp"

using namespace hybridshape;

namespace {

// All-pairs oracle for exact_signed_distance.
field::ScalarGrid brute_sdf(const field::ScalarGrid& mask) {
  const int d = mask.dim(), r = mask.resolution();
  auto coords = [&](std::size_t i, int* c) {
    for (int a = d - 1; a >= 0; --a) {
      c[a] = static_cast<int>(i % r);
      i /= r;
    }
  };
  field::ScalarGrid out(d, r);
  int ci[3], cj[3];
  for (std::size_t i = 0; i < mask.size(); ++i) {
    coords(i, ci);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < mask.size(); ++j) {
      if ((mask[j] > 0.5) == (mask[i] > 0.5)) continue;
      coords(j, cj);
      double s = 0.0;
      for (int a = 0; a < d; ++a) s += double(ci[a] - cj[a]) * (ci[a] - cj[a]);
      best = std::min(best, s);
    }
    out[i] = mask[i] > 0.5 ? std::sqrt(best) - 0.5 : 0.5 - std::sqrt(best);
  }
  return out;
}

field::ScalarGrid random_mask(int dim, int r, double density, std::uint64_t seed) {
  Rng rng(seed);
  field::ScalarGrid m(dim, r);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = rng.uniform() < density ? 1.0 : 0.0;
  m[0] = 1.0;
  m[1] = 0.0;
  return m;
}

topo::TopoConfig quick_config(double tau, int iterations) {
  topo::TopoConfig cfg;
  cfg.tau = tau;
  cfg.registration.iterations = iterations;
  cfg.registration.samples = 4000;
  return cfg;
}

}  // namespace

TEST_CASE("single cell distance pattern") {
  field::ScalarGrid mask(3, 9);
  mask[mask.index(4, 4, 4)] = 1.0;
  const auto sdf = topo::exact_signed_distance(mask);
  const auto oracle = brute_sdf(mask);
  for (std::size_t i = 0; i < sdf.size(); ++i) CHECK(sdf[i] == doctest::Approx(oracle[i]).epsilon(1e-14));
  const double center = sdf.at(4, 4, 4);
  CHECK(center > 0.0);
  CHECK(center <= 1.0);
  CHECK(sdf.at(4, 4, 5) == doctest::Approx(-0.5));
  CHECK(sdf.at(4, 5, 5) == doctest::Approx(0.5 - std::sqrt(2.0)));
  CHECK(sdf.at(0, 0, 0) == doctest::Approx(0.5 - std::sqrt(48.0)));

  const auto smooth = topo::signed_distance_grid(mask);
  const auto vals = smooth.values();
  CHECK(std::max_element(vals.begin(), vals.end()) - vals.begin() == static_cast<long>(smooth.index(4, 4, 4)));
}

TEST_CASE("exact transform matches all-pairs oracle on random masks") {
  for (int dim : {2, 3}) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const int r = dim == 2 ? 17 : 8;
      const auto mask = random_mask(dim, r, 0.1 * seed, seed);
      const auto sdf = topo::exact_signed_distance(mask);
      const auto oracle = brute_sdf(mask);
      double worst = 0.0;
      for (std::size_t i = 0; i < sdf.size(); ++i) worst = std::max(worst, std::abs(sdf[i] - oracle[i]));
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("half-space gives an exact unit ramp") {
  const int r = 16;
  field::ScalarGrid mask(3, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k) mask[mask.index(i, j, k)] = i < 7 ? 1.0 : 0.0;
  const auto sdf = topo::exact_signed_distance(mask);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k) CHECK(sdf.at(i, j, k) == 6.5 - i);
}

TEST_CASE("complement negates the exact transform") {
  const auto mask = random_mask(3, 10, 0.4, 9);
  field::ScalarGrid comp(3, 10);
  for (std::size_t i = 0; i < mask.size(); ++i) comp[i] = 1.0 - mask[i];
  const auto a = topo::exact_signed_distance(mask), b = topo::exact_signed_distance(comp);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == -b[i]);
}

TEST_CASE("smoothed sphere crosses zero near its radius") {
  const int r = 32;
  const double c = 16.0, radius = 10.0;
  field::ScalarGrid mask(3, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k) {
        const double x = i + 0.5 - c, y = j + 0.5 - c, z = k + 0.5 - c;
        mask[mask.index(i, j, k)] = std::sqrt(x * x + y * y + z * z) < radius ? 1.0 : 0.0;
      }
  const auto sdf = topo::signed_distance_grid(mask);
  const auto surf = mesh::marching_cubes(sdf, 0.0);
  REQUIRE(!surf.faces.empty());
  double worst = 0.0;
  for (const auto& v : surf.vertices) {
    const double d = r * mesh::norm(mesh::operator-(v, mesh::Vec3{c / r, c / r, c / r}));
    worst = std::max(worst, std::abs(d - radius));
  }
  CHECK(worst < 1.0);
}

TEST_CASE("distance transform errors") {
  field::ScalarGrid zeros(3, 8), ones(3, 8), bad(3, 8);
  for (std::size_t i = 0; i < ones.size(); ++i) ones[i] = 1.0;
  bad[0] = 0.5;
  bad[1] = 1.0;
  CHECK_THROWS_WITH_AS(topo::exact_signed_distance(zeros), "no boundary", InvalidArgument);
  CHECK_THROWS_WITH_AS(topo::signed_distance_grid(ones), "no boundary", InvalidArgument);
  CHECK_THROWS_AS(topo::exact_signed_distance(bad), InvalidArgument);
  field::ScalarGrid mask(3, 8);
  mask[0] = 1.0;
  CHECK_THROWS_AS(topo::signed_distance_grid(mask, 0.0), InvalidArgument);
}

TEST_CASE("genus-0 input passes through") {
  const int r = 20;
  const auto chi = fixtures::sphere_grid(r, {0.5, 0.5, 0.5}, 0.3);
  const auto input = mesh::marching_cubes(chi, 0.0);
  const auto res = topo::correct_topology(chi, quick_config(0.5, 10), input);
  CHECK(res.attempts == 1);
  CHECK(res.tau == 0.5);
  CHECK(res.euler_after == 2);
  CHECK(mesh::is_watertight(res.mesh));
  CHECK(res.si_before_registration == 0.0);
  CHECK(res.final_chamfer < res.initial_chamfer);
  CHECK(r * metrics::assd(res.mesh, input, 20000, 3) < 2.0);
}

TEST_CASE("registration keeps the offset connectivity") {
  const int r = 20;
  const auto fx = fixtures::tunnel_fixture(r);
  const auto input = mesh::marching_cubes(fx.chi, 0.0);
  const auto res = topo::correct_topology(fx.chi, quick_config(0.5, 3), input);
  REQUIRE(res.mesh.vertices.size() == res.offset_mesh.vertices.size());
  CHECK(res.mesh.faces == res.offset_mesh.faces);
}

TEST_CASE("positive offset fills a tunnel") {
  const int r = 20;
  const auto fx = fixtures::tunnel_fixture(r);
  const auto input = mesh::marching_cubes(fx.chi, 0.0);
  REQUIRE(mesh::euler_characteristic(input) == 0);
  const auto res = topo::correct_topology(fx.chi, quick_config(0.5, 5), input);
  CHECK(res.euler_before == 0);
  CHECK(res.euler_after == 2);
  CHECK(res.attempts == 1);
  CHECK(res.si_before_registration == 0.0);
  CHECK(r * metrics::assd_excluding(res.mesh, input, 20000, 3, fx.near_defect) < 2.0);
}

TEST_CASE("negative offset removes a handle") {
  const int r = 20;
  const auto fx = fixtures::handle_fixture(r);
  const auto input = mesh::marching_cubes(fx.chi, 0.0);
  REQUIRE(mesh::euler_characteristic(input) == 0);
  const auto res = topo::correct_topology(fx.chi, quick_config(-1.8, 5), input);
  CHECK(res.euler_after == 2);
  CHECK(res.tau == -1.8);
  CHECK(res.si_before_registration == 0.0);
  CHECK(res.final_chamfer < res.initial_chamfer);
}

TEST_CASE("retry ladder widens the offset") {
  const int r = 20;
  const auto fx = fixtures::tunnel_fixture(r, 2.5);
  const auto input = mesh::marching_cubes(fx.chi, 0.0);
  REQUIRE(mesh::euler_characteristic(input) == 0);
  const auto res = topo::correct_topology(fx.chi, quick_config(0.5, 1), input);
  CHECK(res.attempts == 2);
  CHECK(res.tau == 1.0);
  CHECK(res.euler_after == 2);
}

TEST_CASE("exhausted ladder reports the last offset") {
  const int r = 20;
  const auto chi = fixtures::open_torus_grid(r);
  const auto input = mesh::marching_cubes(chi, 0.0);
  CHECK_THROWS_WITH_AS(topo::correct_topology(chi, quick_config(0.5, 1), input),
                       "topology correction failed at tau=1.5", TopologyError);
  auto cfg = quick_config(-1.8, 1);
  cfg.attempts = 1;
  CHECK_THROWS_WITH_AS(topo::correct_topology(chi, cfg, input), "topology correction failed at tau=-1.8",
                       TopologyError);
}

TEST_CASE("topology correction argument checks") {
  const auto chi = fixtures::sphere_grid(16, {0.5, 0.5, 0.5}, 0.3);
  const auto input = mesh::marching_cubes(chi, 0.0);
  CHECK_THROWS_AS(topo::correct_topology(chi, quick_config(0.5, 1), mesh::SurfaceMesh{}), InvalidArgument);
  auto cfg = quick_config(0.5, 1);
  cfg.smooth_std = -1.0;
  CHECK_THROWS_AS(topo::correct_topology(chi, cfg, input), InvalidArgument);
  cfg = quick_config(0.5, 1);
  cfg.attempts = 0;
  CHECK_THROWS_AS(topo::correct_topology(chi, cfg, input), InvalidArgument);
  CHECK_THROWS_AS(topo::correct_topology(fixtures::circle_grid(16, {0.5, 0.5}, 0.3), cfg, input), InvalidArgument);
}

TEST_CASE("registered surface stays free of self-intersections") {
  const int r = 20;
  const auto fx = fixtures::handle_fixture(r);
  const auto input = mesh::marching_cubes(fx.chi, 0.0);
  topo::TopoConfig cfg;
  cfg.tau = -1.8;
  const auto res = topo::correct_topology(fx.chi, cfg, input);
  CHECK(res.si_before_registration == 0.0);
  CHECK(res.si_after_registration < 1e-3);
}
