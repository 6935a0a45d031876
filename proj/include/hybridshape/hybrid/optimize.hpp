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

#include "hybridshape/field/grid.hpp"

namespace hybridshape::hybrid {

struct HybridConfig {
  std::size_t points = 1000;  // K, used by drivers that build the initial cloud
  int resolution = 64;
  double sigma = 2.0;
  double m = 0.5;
  double lr = 3e-3;
  int iterations = 1000;
  bool edge_weighting = true;  // weighted MSE against the target's edge map
  std::uint64_t seed = 0;
  int smoothing_window = 50;
  std::function<void(int iteration, double loss)> on_iteration;
};

struct HybridResult {
  field::OrientedPointCloud cloud;
  field::ScalarGrid chi;         // indicator of the final cloud
  std::vector<double> losses;    // before each update
  std::vector<double> smoothed;  // trailing mean over smoothing_window
  double final_loss = 0.0;
  double max_normal_error = 0.0;  // max | |n| - 1 | after any step
};

// Adam on point positions and normals so that the DPSR indicator of the cloud
// matches target_chi. Normals are projected back to unit length and positions
// into the unit box after every step.
HybridResult optimize_oriented_points(const field::ScalarGrid& target_chi, const field::OrientedPointCloud& init,
                                      const HybridConfig& cfg);

// out[i] = mean(values[max(0, i - window + 1) .. i]).
std::vector<double> trailing_mean(const std::vector<double>& values, int window);

}  // namespace hybridshape::hybrid
