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
#include <vector>

#include "hybridshape/flow/field.hpp"
#include "hybridshape/flow/shape.hpp"
#include "hybridshape/mesh/surface_mesh.hpp"

namespace hybridshape::hybrid {

struct DeformWeights {
  double cd = 1.0;
  double nd = 0.02;
  double edge = 0.005;
  double nc = 0.005;
};

struct DeformBaselineConfig {
  DeformWeights weights;
  double lr = 1e-4;
  int iterations = 3000;
  std::size_t samples = 1000;
  flow::FieldConfig field{2, 5.0, 128, 256, 2, 30.0, 0};
  std::uint64_t seed = 0;
  std::function<void(int iteration, double loss)> on_iteration;
};

struct DeformResult {
  mesh::Contour contour;
  std::vector<double> losses;
  double initial_chamfer = 0.0;
  double final_chamfer = 0.0;
};

// Loss value plus its gradient with respect to the shape vertices.
struct RegularizerLoss {
  double value = 0.0;
  std::vector<double> vertex_grad;
};

// Mean squared deviation of edge lengths from their mean.
RegularizerLoss edge_length_loss(const flow::Shape& contour);
// Mean of 1 - cos between the normals of consecutive edges.
RegularizerLoss normal_consistency_loss(const flow::Shape& contour);

// Explicit deformation: source vertices move to x + f(x) with f a neural
// field, fitted by Adam on chamfer, normal distance and the two regularizers.
DeformResult deform_baseline_2d(const mesh::Contour& target, const mesh::Contour& source,
                                const DeformBaselineConfig& cfg);

}  // namespace hybridshape::hybrid
