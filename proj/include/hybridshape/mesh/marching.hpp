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

#include "hybridshape/field/grid.hpp"
#include "hybridshape/mesh/surface_mesh.hpp"

namespace hybridshape::mesh {

// Grid node (i, j, k) sits at ((i, j, k) + 0.5) / r, matching field::interpolate.
// Inside is value > iso; triangles face toward decreasing values. Ambiguous
// faces are split by the face-center average so that negating both the grid
// and the level reproduces the same surface with flipped winding.
SurfaceMesh marching_cubes(const field::ScalarGrid& grid, double iso = 0.0);

// Loops run counter-clockwise around the inside region.
Contour marching_squares(const field::ScalarGrid& grid, double iso = 0.0);

}  // namespace hybridshape::mesh
