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

#include <array>
#include <vector>

#include "hybridshape/mesh/surface_mesh.hpp"

namespace hybridshape::mesh {

// Exact signs: +1, 0 or -1.
// orient3d is the sign of det[b - a, c - a, d - a].
int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);
int orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

using Tri3 = std::array<Vec3, 3>;

// Closed triangles; touching counts as intersecting.
bool triangles_intersect(const Tri3& t1, const Tri3& t2);

// Per face: 1 if it intersects some face with which it shares no vertex.
std::vector<char> self_intersecting_faces(const SurfaceMesh& mesh);

double self_intersection_ratio(const SurfaceMesh& mesh);

}  // namespace hybridshape::mesh
