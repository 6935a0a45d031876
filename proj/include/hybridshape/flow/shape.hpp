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

#include "hybridshape/mesh/surface_mesh.hpp"
#include "hybridshape/metrics/nearest.hpp"

namespace hybridshape::flow {

// Piecewise-linear shape whose vertices can move: triangles in 3D, closed
// polylines in 2D. Elements hold `dim` vertex indices each.
struct Shape {
  int dim = 0;
  std::vector<double> vertices;
  std::vector<int> elements;
  std::vector<int> loop_sizes;  // 2D only

  std::size_t vertex_count() const { return dim == 0 ? 0 : vertices.size() / dim; }
  std::size_t element_count() const { return dim == 0 ? 0 : elements.size() / dim; }
};

Shape to_shape(const mesh::SurfaceMesh& mesh);
Shape to_shape(const mesh::Contour& contour);
mesh::SurfaceMesh to_mesh(const Shape& shape);
mesh::Contour to_contour(const Shape& shape);

// Element measure (area or length) and unit normal; 2D normals point right of
// the edge direction.
double element_measure(const Shape& shape, std::size_t e);
std::vector<double> element_normal(const Shape& shape, std::size_t e);

// Uniform samples as (element, barycentric weights).
struct ShapeSamples {
  int dim = 0;
  std::vector<int> element;
  std::vector<double> weights;  // dim per sample

  std::size_t size() const { return element.size(); }
};

ShapeSamples sample_shape(const Shape& shape, std::size_t count, std::uint64_t seed);
metrics::PointSet sample_points(const Shape& shape, const ShapeSamples& samples);

struct SampleLoss {
  double chamfer = 0.0;  // squared, sum of the two directional means
  double normal = 0.0;   // average of the two directional means of 1 - |cos|
  double total = 0.0;    // chamfer + normal_weight * normal
  std::vector<double> vertex_grad;
};

// Loss between samples of a moving shape and a fixed oriented target, with the
// gradient taken through sample positions and element normals. Nearest
// neighbour assignments are held fixed.
SampleLoss sample_loss(const Shape& moving, const ShapeSamples& samples, const metrics::PointSet& target,
                       const metrics::NearestIndex& target_index, double normal_weight);

}  // namespace hybridshape::flow
