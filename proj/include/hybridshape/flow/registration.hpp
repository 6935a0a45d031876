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
#include "hybridshape/flow/integrate.hpp"
#include "hybridshape/flow/shape.hpp"
#include "hybridshape/mesh/surface_mesh.hpp"

namespace hybridshape::flow {

struct RegistrationConfig {
  int iterations = 75;
  double lr = 3e-4;
  std::size_t samples = 20000;
  double h = 0.2;
  std::uint64_t seed = 0;
  double normal_weight = 0.0;
  GradientMode mode = GradientMode::discrete;
  FieldConfig field;  // dim and seed are taken from the shapes and `seed`
  std::function<void(int iteration, double loss)> on_iteration;
};

struct RegistrationResult {
  VelocityField field;
  Shape deformed;  // source connectivity, flowed vertices
  std::vector<double> losses;
  double initial_chamfer = 0.0;  // evaluation samples, before any update
  double final_chamfer = 0.0;
};

// Fits a stationary velocity field that flows source onto target.
RegistrationResult register_shapes(const Shape& source, const Shape& target, const RegistrationConfig& cfg);

RegistrationResult register_surfaces(const mesh::SurfaceMesh& source, const mesh::SurfaceMesh& target,
                                     const RegistrationConfig& cfg);
RegistrationResult register_surfaces(const mesh::Contour& source, const mesh::Contour& target,
                                     const RegistrationConfig& cfg);

// Symmetric squared chamfer between samples of two shapes.
double shape_chamfer(const Shape& a, const Shape& b, std::size_t samples, std::uint64_t seed);

}  // namespace hybridshape::flow
