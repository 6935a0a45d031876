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
#include <utility>
#include <vector>

#include "hybridshape/field/grid.hpp"
#include "hybridshape/hybrid/optimize.hpp"
#include "hybridshape/metrics/metrics.hpp"
#include "hybridshape/mesh/surface_mesh.hpp"
#include "hybridshape/topo/topology.hpp"

namespace hybridshape::hybrid {

enum class TopoMode { off, on, automatic };

TopoMode parse_topo_mode(const std::string& s);
std::string to_string(TopoMode mode);

struct ReconstructConfig {
  HybridConfig hybrid;
  topo::TopoConfig topo;
  TopoMode topo_mode = TopoMode::automatic;  // automatic: only when the extracted surface is not genus 0
  std::size_t target_samples = 50000;        // oriented samples behind the target indicator
  std::size_t eval_samples = 100000;
  std::uint64_t seed = 0;
};

struct ReconstructResult {
  field::ScalarGrid target_chi;
  field::OrientedPointCloud init;
  HybridResult hybrid;
  mesh::SurfaceMesh extracted;  // marching cubes on the optimized indicator
  std::optional<topo::TopoResult> topo;
  mesh::SurfaceMesh mesh;       // final output
  metrics::MetricReport metrics;
  std::vector<std::pair<std::string, double>> stage_seconds;
};

// Sphere through the target's sample centroid with the mean sample radius.
field::OrientedPointCloud sphere_init(const field::OrientedPointCloud& target_samples, std::size_t count,
                                      std::uint64_t seed);

// target samples -> target indicator -> point optimization -> marching cubes
// -> topology correction -> metrics against the target. Without `init`, the
// points start on sphere_init.
ReconstructResult reconstruct(const mesh::SurfaceMesh& target, const ReconstructConfig& cfg,
                              const mesh::SurfaceMesh* init = nullptr);

}  // namespace hybridshape::hybrid
