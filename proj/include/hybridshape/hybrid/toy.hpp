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
#include <optional>
#include <string>
#include <vector>

#include "hybridshape/field/grid.hpp"
#include "hybridshape/flow/registration.hpp"
#include "hybridshape/hybrid/baseline.hpp"
#include "hybridshape/hybrid/optimize.hpp"
#include "hybridshape/mesh/surface_mesh.hpp"

namespace hybridshape::hybrid {

// 2D comparison of explicit deformation, diffeomorphic flow and the hybrid
// point/indicator optimization against a star polygon.
struct ToyConfig {
  int polygon_pivots = 40;
  int circle_pivots = 200;
  double circle_radius = 0.25;
  std::uint64_t seed = 0;
  double target_spacing = 0.25;  // cells between the even samples behind the target indicator
  std::size_t eval_samples = 4000;
  DeformBaselineConfig baseline;
  HybridConfig hybrid = default_hybrid();
  bool run_flow = true;
  flow::RegistrationConfig flow = default_flow();

  static HybridConfig default_hybrid();
  static flow::RegistrationConfig default_flow();
};

struct ToyResult {
  mesh::Contour target;
  mesh::Contour source;
  DeformResult baseline;
  std::optional<flow::RegistrationResult> flow;
  mesh::Contour flow_contour;
  field::ScalarGrid target_chi;
  field::OrientedPointCloud hybrid_init;
  HybridResult hybrid;
  mesh::Contour hybrid_contour;
  // symmetric squared chamfer to the polygon, same samples for every method
  double baseline_chamfer = 0.0;
  double flow_chamfer = 0.0;
  double hybrid_chamfer = 0.0;
};

ToyResult run_toy2d(const ToyConfig& cfg);

// Panels a (source and target), d (explicit deformation), e (hybrid initial
// points), f (flow), g (hybrid result) as SVG plus one loss CSV per method.
// Returns the written paths.
std::vector<std::string> write_toy_outputs(const ToyResult& result, const std::string& dir);

}  // namespace hybridshape::hybrid
