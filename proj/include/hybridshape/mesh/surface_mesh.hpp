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
#include <vector>

#include "hybridshape/mesh/vec.hpp"

namespace hybridshape::mesh {

using Triangle = std::array<int, 3>;

// Triangle mesh. Faces are counter-clockwise seen from outside.
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> faces;
  std::vector<Vec3> normals;  // optional, per vertex

  bool empty() const { return faces.empty(); }
  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t face_count() const { return faces.size(); }

  // Throws InvalidArgument on out-of-range indices.
  void validate() const;
};

// Closed polylines in the plane. Outer boundaries run counter-clockwise,
// so the outward normal of an edge (dx, dy) is (dy, -dx).
struct Contour {
  std::vector<std::vector<Vec2>> loops;

  bool empty() const { return loops.empty(); }
  std::size_t vertex_count() const;
};

Vec3 face_normal(const SurfaceMesh& mesh, std::size_t face);  // unit length
double face_area(const SurfaceMesh& mesh, std::size_t face);
double surface_area(const SurfaceMesh& mesh);
// Signed volume; positive for outward-oriented closed meshes.
double signed_volume(const SurfaceMesh& mesh);
double contour_length(const Contour& contour);

// Every undirected edge is used by exactly two faces, once in each direction.
bool is_watertight(const SurfaceMesh& mesh);

// V - E + F over referenced vertices and unique undirected edges.
long euler_characteristic(const SurfaceMesh& mesh);

// (2 - chi) / 2. Throws InvalidArgument("open surface") for non-watertight
// meshes and InvalidArgument for disconnected ones.
long genus(const SurfaceMesh& mesh);

// Face components (faces sharing a vertex are connected). Returns a label per
// face and the component count.
std::vector<int> face_components(const SurfaceMesh& mesh, int* count = nullptr);

// Component with the most faces, unreferenced vertices dropped.
SurfaceMesh largest_component(const SurfaceMesh& mesh);

// Drops unreferenced vertices, preserving face order.
SurfaceMesh compact(const SurfaceMesh& mesh);

// Per-vertex normals from area-weighted face normals.
std::vector<Vec3> vertex_normals(const SurfaceMesh& mesh);

// Rigid motion x -> R x + t applied to a copy.
SurfaceMesh transformed(const SurfaceMesh& mesh, const std::array<double, 9>& rotation, const Vec3& translation);

// Merges two meshes into one (indices of `b` are offset).
SurfaceMesh merged(const SurfaceMesh& a, const SurfaceMesh& b);

}  // namespace hybridshape::mesh
