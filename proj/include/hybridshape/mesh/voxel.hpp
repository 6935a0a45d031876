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

#include "hybridshape/field/grid.hpp"

namespace hybridshape::mesh {

// 1 where value > threshold, else 0.
field::ScalarGrid binarize(const field::ScalarGrid& grid, double threshold);

// Largest face-connected (6-neighbour in 3D, 4 in 2D) set of non-zero cells,
// returned as a 0/1 mask. Ties go to the component found first in index order.
field::ScalarGrid largest_component(const field::ScalarGrid& mask);

}  // namespace hybridshape::mesh
