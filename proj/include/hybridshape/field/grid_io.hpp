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

#include <cstdint>
#include <string>
#include <vector>

#include "hybridshape/field/grid.hpp"

namespace hybridshape::field {

// HGRD layout (little endian):
//   bytes 0..7   magic "HGRDFILE"
//   bytes 8..11  u32 format version (1)
//   bytes 12..15 u32 reserved (0)
//   u32 dimension d, u32 resolution r, u32 components c
//   c * r^d f64 values, component slowest, then row-major with axis 0 slowest.
inline constexpr std::uint32_t kHgrdVersion = 1;

struct GridFile {
  int dim = 0;
  int resolution = 0;
  int components = 0;
  std::vector<double> values;
};

void write_hgrd(const std::string& path, const GridFile& file);
GridFile read_hgrd(const std::string& path);

void write_scalar_grid(const std::string& path, const ScalarGrid& grid);
void write_vector_grid(const std::string& path, const VectorGrid& grid);
// Throws InvalidArgument if the file does not hold exactly one component.
ScalarGrid read_scalar_grid(const std::string& path);

}  // namespace hybridshape::field
