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

#include "hybridshape/field/grid_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "hybridshape/error.hpp"

namespace hybridshape::field {

namespace {

static_assert(std::endian::native == std::endian::little, "HGRD I/O assumes a little-endian host");

constexpr char kMagic[8] = {'H', 'G', 'R', 'D', 'F', 'I', 'L', 'E'};

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw InvalidArgument("truncated HGRD file: " + path);
  return v;
}

}  // namespace

void write_hgrd(const std::string& path, const GridFile& file) {
  std::size_t cells = 1;
  for (int a = 0; a < file.dim; ++a) cells *= static_cast<std::size_t>(file.resolution);
  if (file.values.size() != cells * file.components) throw InvalidArgument("HGRD value count mismatch");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot open for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kHgrdVersion);
  put<std::uint32_t>(out, 0);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(file.dim));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(file.resolution));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(file.components));
  out.write(reinterpret_cast<const char*>(file.values.data()),
            static_cast<std::streamsize>(file.values.size() * sizeof(double)));
  if (!out) throw InvalidArgument("failed writing " + path);
}

GridFile read_hgrd(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open: " + path);
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw InvalidArgument("not an HGRD file: " + path);
  const auto version = get<std::uint32_t>(in, path);
  if (version != kHgrdVersion) throw InvalidArgument("unsupported HGRD version in " + path);
  get<std::uint32_t>(in, path);
  GridFile f;
  f.dim = static_cast<int>(get<std::uint32_t>(in, path));
  f.resolution = static_cast<int>(get<std::uint32_t>(in, path));
  f.components = static_cast<int>(get<std::uint32_t>(in, path));
  if ((f.dim != 2 && f.dim != 3) || f.resolution < 1 || f.resolution > 4096 || f.components < 1 ||
      f.components > 16)
    throw InvalidArgument("bad HGRD header in " + path);
  std::size_t cells = 1;
  for (int a = 0; a < f.dim; ++a) cells *= static_cast<std::size_t>(f.resolution);
  f.values.resize(cells * f.components);
  if (!in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(double))))
    throw InvalidArgument("truncated HGRD file: " + path);
  return f;
}

void write_scalar_grid(const std::string& path, const ScalarGrid& grid) {
  GridFile f{grid.dim(), grid.resolution(), 1, std::vector<double>(grid.values().begin(), grid.values().end())};
  write_hgrd(path, f);
}

void write_vector_grid(const std::string& path, const VectorGrid& grid) {
  GridFile f{grid.dim(), grid.resolution(), grid.dim(),
             std::vector<double>(grid.values().begin(), grid.values().end())};
  write_hgrd(path, f);
}

ScalarGrid read_scalar_grid(const std::string& path) {
  GridFile f = read_hgrd(path);
  if (f.components != 1) throw InvalidArgument("expected a scalar HGRD grid in " + path);
  return ScalarGrid(f.dim, f.resolution, std::move(f.values));
}

}  // namespace hybridshape::field
