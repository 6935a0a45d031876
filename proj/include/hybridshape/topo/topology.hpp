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

#include <vector>

#include "hybridshape/field/grid.hpp"
#include "hybridshape/flow/registration.hpp"
#include "hybridshape/mesh/surface_mesh.hpp"

namespace hybridshape::topo {

struct TopoConfig {
  double tau = 0.5;          // level offset in grid cells; > 0 dilates, < 0 erodes
  double smooth_std = 1.0;   // cells
  double threshold = 0.0;    // binarization level on chi
  int attempts = 3;
  double tau_step = 0.5;     // |tau| growth per retry
  flow::RegistrationConfig registration;
};

// Exact Euclidean distance between cell centers, measured so that the zero
// level sits on the mask boundary: inside cells get d_out - 1/2, outside
// cells -(d_in - 1/2). Units are cells.
field::ScalarGrid exact_signed_distance(const field::ScalarGrid& mask);

// exact_signed_distance followed by a Gaussian blur (size 7, replicate padding).
field::ScalarGrid signed_distance_grid(const field::ScalarGrid& mask, double smooth_std = 1.0);

struct TopoResult {
  mesh::SurfaceMesh mesh;       // registered, connectivity of `offset_mesh`
  mesh::SurfaceMesh offset_mesh;
  double tau = 0.0;             // offset that succeeded
  int attempts = 0;
  long euler_before = 0;
  long euler_after = 0;
  double si_before_registration = 0.0;
  double si_after_registration = 0.0;
  std::vector<double> losses;
  double initial_chamfer = 0.0;
  double final_chamfer = 0.0;
};

// Binarize, keep the largest component, offset the smoothed signed distance
// by tau and register the genus-0 offset surface back onto `defective`.
// Throws TopologyError when every attempt fails.
TopoResult correct_topology(const field::ScalarGrid& chi, const TopoConfig& cfg, const mesh::SurfaceMesh& defective);

}  // namespace hybridshape::topo
