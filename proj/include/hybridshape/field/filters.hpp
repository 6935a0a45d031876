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

namespace hybridshape::field {

// Normalized 1D Gaussian taps; size is odd (radius = size / 2).
std::vector<double> gaussian_taps(int size, double std_dev);

// Separable Gaussian blur with replicate padding.
ScalarGrid gaussian_blur(const ScalarGrid& grid, int size, double std_dev);

// Gradient magnitude from the 3-tap Sobel operator (derivative [-1 0 1] on
// one axis, smoothing [1 2 1] on the others), replicate padding.
ScalarGrid sobel_magnitude(const ScalarGrid& grid);

}  // namespace hybridshape::field
