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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "hybridshape/field/grid.hpp"
#include "hybridshape/mesh/surface_mesh.hpp"

namespace hybridshape::fixtures {

// Signed distances in domain units, positive inside.
double sphere_distance(const mesh::Vec3& p, const mesh::Vec3& center, double radius);
double torus_distance(const mesh::Vec3& p, const mesh::Vec3& center, double major, double minor);

// Samples f at every cell center.
field::ScalarGrid sample_grid(int dim, int resolution, const std::function<double(const double*)>& f);

field::ScalarGrid sphere_grid(int resolution, const mesh::Vec3& center, double radius);
field::ScalarGrid torus_grid(int resolution, const mesh::Vec3& center, double major, double minor);
field::ScalarGrid circle_grid(int resolution, const mesh::Vec2& center, double radius);

// Exact sphere samples with outward normals (Fibonacci lattice, rotated by seed).
field::OrientedPointCloud sphere_points(std::size_t count, const mesh::Vec3& center, double radius,
                                        std::uint64_t seed);

mesh::SurfaceMesh tetrahedron(const mesh::Vec3& a, const mesh::Vec3& b, const mesh::Vec3& c, const mesh::Vec3& d);

// Axis-aligned box, 12 outward triangles.
mesh::SurfaceMesh box_mesh(const mesh::Vec3& lo, const mesh::Vec3& hi);

// Marching-cubes sphere in the unit cube.
mesh::SurfaceMesh sphere_mesh(int resolution, const mesh::Vec3& center, double radius);

// Genus-1 indicator grids for topology correction, signed distances in
// domain units. near_defect marks the region the correction is allowed to change.
struct DefectFixture {
  field::ScalarGrid chi;
  std::function<bool(const mesh::Vec3&)> near_defect;
};

// Ball of radius 0.3 drilled along z by a tunnel of `tunnel_cells` radius.
DefectFixture tunnel_fixture(int resolution, double tunnel_cells = 1.2);

// Ball of radius 0.28 with a thin arch on top (tube radius `tube_cells`).
DefectFixture handle_fixture(int resolution, double tube_cells = 1.0);

// Thick torus whose hole no small offset can close.
field::ScalarGrid open_torus_grid(int resolution);

// Star polygon around (0.5, 0.5): evenly spaced pivots with radii drawn
// uniformly from [0.15, 0.4]. Counter-clockwise.
mesh::Contour make_polygon_target(int pivots = 40, std::uint64_t seed = 0);

// Counter-clockwise circle through n pivots.
mesh::Contour make_circle(int n = 200, double radius = 0.25, const mesh::Vec2& center = {0.5, 0.5});

// Sphere of radius 0.3 with a ball of radius 0.12 carved from its top.
double dented_sphere_distance(const mesh::Vec3& p);

}  // namespace hybridshape::fixtures
