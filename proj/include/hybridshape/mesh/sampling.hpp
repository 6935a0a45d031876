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
#include <vector>

#include "hybridshape/field/grid.hpp"
#include "hybridshape/mesh/surface_mesh.hpp"

namespace hybridshape::mesh {

// Point on face `face` at w0 * v0 + w1 * v1 + w2 * v2.
struct FaceSample {
  int face = 0;
  double w1 = 0.0, w2 = 0.0;
  double w0() const { return 1.0 - w1 - w2; }
};

// Area-weighted; same seed gives the same samples.
std::vector<FaceSample> sample_faces(const SurfaceMesh& mesh, std::size_t count, std::uint64_t seed);

Vec3 sample_position(const SurfaceMesh& mesh, const FaceSample& s);

field::OrientedPointCloud sample_surface(const SurfaceMesh& mesh, std::size_t count, std::uint64_t seed);

// Length-weighted; normals point to the right of each loop.
field::OrientedPointCloud sample_surface(const Contour& contour, std::size_t count, std::uint64_t seed);

}  // namespace hybridshape::mesh
