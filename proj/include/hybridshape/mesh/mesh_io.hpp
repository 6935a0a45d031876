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

#include <string>
#include <vector>

#include "hybridshape/mesh/surface_mesh.hpp"

namespace hybridshape::mesh {

// ASCII OBJ with v / vn / f records (1-based indices).
void write_obj(const SurfaceMesh& mesh, const std::string& path);
SurfaceMesh read_obj(const std::string& path);

// Binary little-endian PLY: double x y z (+ nx ny nz), int32 face lists.
void write_ply(const SurfaceMesh& mesh, const std::string& path);
SurfaceMesh read_ply(const std::string& path);

// Dispatch on the .obj / .ply extension.
void write_mesh(const SurfaceMesh& mesh, const std::string& path);
SurfaceMesh read_mesh(const std::string& path);

// "loop N" header followed by N "x y" rows, per loop.
void write_loops(const Contour& contour, const std::string& path);
Contour read_loops(const std::string& path);

struct SvgLayer {
  Contour contour;
  std::string stroke = "#000000";
  double width = 1.5;
  bool dashed = false;
};

// Unit square mapped to a size x size canvas, y pointing up.
void write_svg(const std::vector<SvgLayer>& layers, const std::string& path, int size = 512);

}  // namespace hybridshape::mesh
