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

#include "hybridshape/field/filters.hpp"

#include <algorithm>
#include <cmath>

#include "hybridshape/error.hpp"

namespace hybridshape::field {

namespace {

// Applies a 1D filter along `axis` with replicate padding.
ScalarGrid filter_axis(const ScalarGrid& in, int axis, const std::vector<double>& taps) {
  const int r = in.resolution();
  const int d = in.dim();
  const int radius = static_cast<int>(taps.size()) / 2;
  std::size_t stride = 1;
  for (int a = axis + 1; a < d; ++a) stride *= r;
  ScalarGrid out(d, r);
  auto src = in.values();
  auto dst = out.values();
  for (std::size_t idx = 0; idx < in.size(); ++idx) {
    const int coord = static_cast<int>((idx / stride) % r);
    const std::size_t line_start = idx - static_cast<std::size_t>(coord) * stride;
    double acc = 0.0;
    for (int t = -radius; t <= radius; ++t) {
      const int c = std::clamp(coord + t, 0, r - 1);
      acc += taps[t + radius] * src[line_start + static_cast<std::size_t>(c) * stride];
    }
    dst[idx] = acc;
  }
  return out;
}

}  // namespace

std::vector<double> gaussian_taps(int size, double std_dev) {
  if (size < 1 || size % 2 == 0) throw InvalidArgument("Gaussian kernel size must be odd");
  if (!(std_dev > 0.0)) throw InvalidArgument("Gaussian std must be positive");
  const int radius = size / 2;
  std::vector<double> taps(size);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    taps[i + radius] = std::exp(-0.5 * (i * i) / (std_dev * std_dev));
    sum += taps[i + radius];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

ScalarGrid gaussian_blur(const ScalarGrid& grid, int size, double std_dev) {
  const auto taps = gaussian_taps(size, std_dev);
  ScalarGrid out = grid;
  for (int a = 0; a < grid.dim(); ++a) out = filter_axis(out, a, taps);
  return out;
}

ScalarGrid sobel_magnitude(const ScalarGrid& grid) {
  const std::vector<double> deriv = {-1.0, 0.0, 1.0};
  const std::vector<double> smooth = {1.0, 2.0, 1.0};
  ScalarGrid mag(grid.dim(), grid.resolution());
  for (int a = 0; a < grid.dim(); ++a) {
    ScalarGrid g = grid;
    for (int b = 0; b < grid.dim(); ++b) g = filter_axis(g, b, b == a ? deriv : smooth);
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += g[i] * g[i];
  }
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::sqrt(mag[i]);
  return mag;
}

}  // namespace hybridshape::field
