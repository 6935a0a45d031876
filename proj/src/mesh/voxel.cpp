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

#include "hybridshape/mesh/voxel.hpp"

#include <vector>

namespace hybridshape::mesh {

field::ScalarGrid binarize(const field::ScalarGrid& grid, double threshold) {
  field::ScalarGrid out(grid.dim(), grid.resolution());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = grid[i] > threshold ? 1.0 : 0.0;
  return out;
}

field::ScalarGrid largest_component(const field::ScalarGrid& mask) {
  const int d = mask.dim(), r = mask.resolution();
  const std::size_t n = mask.size();
  std::vector<int> label(n, -1);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> stride(d);
  for (int a = d - 1, s = 1; a >= 0; --a, s *= r) stride[a] = s;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (mask[seed] == 0.0 || label[seed] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    std::size_t count = 0;
    label[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      ++count;
      for (int a = 0; a < d; ++a) {
        const int coord = static_cast<int>(c / stride[a] % r);
        for (int step : {-1, 1}) {
          if (coord + step < 0 || coord + step >= r) continue;
          const std::size_t nb = step < 0 ? c - stride[a] : c + stride[a];
          if (mask[nb] == 0.0 || label[nb] >= 0) continue;
          label[nb] = id;
          stack.push_back(nb);
        }
      }
    }
    sizes.push_back(count);
  }
  field::ScalarGrid out(d, r);
  if (sizes.empty()) return out;
  int best = 0;
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] > sizes[best]) best = static_cast<int>(i);
  for (std::size_t i = 0; i < n; ++i) out[i] = label[i] == best ? 1.0 : 0.0;
  return out;
}

}  // namespace hybridshape::mesh
