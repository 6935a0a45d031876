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

#include "hybridshape/field/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hybridshape/error.hpp"

namespace hybridshape::field {

namespace {

std::size_t cell_count(int dim, int res) {
  if (dim != 2 && dim != 3) throw InvalidArgument("grid dimension must be 2 or 3, got " + std::to_string(dim));
  if (res < 1) throw InvalidArgument("grid resolution must be positive");
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(res);
  return n;
}

int wrap(int i, int r) {
  i %= r;
  return i < 0 ? i + r : i;
}

}  // namespace

ScalarGrid::ScalarGrid(int dim, int resolution)
    : dim_(dim), res_(resolution), values_(cell_count(dim, resolution), 0.0) {}

ScalarGrid::ScalarGrid(int dim, int resolution, std::vector<double> values)
    : dim_(dim), res_(resolution), values_(std::move(values)) {
  if (values_.size() != cell_count(dim, resolution))
    throw InvalidArgument("scalar grid value count does not match r^d");
  require_finite("scalar grid");
}

bool ScalarGrid::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void ScalarGrid::require_finite(const char* what) const {
  if (!all_finite()) throw InvalidArgument(std::string(what) + " contains non-finite values");
}

double ScalarGrid::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarGrid::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

VectorGrid::VectorGrid(int dim, int resolution)
    : dim_(dim), res_(resolution), cells_(cell_count(dim, resolution)), values_(cells_ * dim, 0.0) {}

bool VectorGrid::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

OrientedPointCloud::OrientedPointCloud(int dim, std::vector<double> positions, std::vector<double> normals)
    : OrientedPointCloud(dim, std::move(positions), std::move(normals), true) {}

OrientedPointCloud OrientedPointCloud::with_raw_normals(int dim, std::vector<double> positions,
                                                        std::vector<double> normals) {
  return OrientedPointCloud(dim, std::move(positions), std::move(normals), false);
}

OrientedPointCloud::OrientedPointCloud(int dim, std::vector<double> positions, std::vector<double> normals,
                                       bool normalize)
    : dim_(dim), positions_(std::move(positions)), normals_(std::move(normals)) {
  if (dim != 2 && dim != 3) throw InvalidArgument("point cloud dimension must be 2 or 3");
  if (positions_.size() % dim != 0 || positions_.size() != normals_.size())
    throw InvalidArgument("point and normal counts differ");
  for (double v : positions_)
    if (!std::isfinite(v)) throw InvalidArgument("point cloud has non-finite positions");
  for (double v : normals_)
    if (!std::isfinite(v)) throw InvalidArgument("point cloud has non-finite normals");
  for (double& v : positions_) v = std::clamp(v, 0.0, 1.0);
  if (!normalize) return;
  for (std::size_t i = 0; i < normals_.size(); i += dim) {
    double norm2 = 0.0;
    for (int a = 0; a < dim; ++a) norm2 += normals_[i + a] * normals_[i + a];
    if (norm2 <= 0.0) throw InvalidArgument("point cloud has a zero normal");
    const double inv = 1.0 / std::sqrt(norm2);
    for (int a = 0; a < dim; ++a) normals_[i + a] *= inv;
  }
}

AxisStencil axis_stencil(double p, int resolution) {
  const double x = p * resolution - 0.5;
  const double base = std::ceil(x) - 1.0;
  const double f = x - base;
  const int b = static_cast<int>(base);
  AxisStencil s;
  s.cell = {wrap(b, resolution), wrap(b + 1, resolution)};
  s.weight = {1.0 - f, f};
  s.dweight = {-static_cast<double>(resolution), static_cast<double>(resolution)};
  return s;
}

double interpolate(const ScalarGrid& grid, std::span<const double> p) {
  return interpolate(grid.values(), grid.dim(), grid.resolution(), p);
}

double interpolate(std::span<const double> values, int dim, int r, std::span<const double> p) {
  if (dim == 2) {
    const AxisStencil sx = axis_stencil(p[0], r), sy = axis_stencil(p[1], r);
    double v = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        v += sx.weight[a] * sy.weight[b] * values[static_cast<std::size_t>(sx.cell[a]) * r + sy.cell[b]];
    return v;
  }
  const AxisStencil sx = axis_stencil(p[0], r), sy = axis_stencil(p[1], r), sz = axis_stencil(p[2], r);
  double v = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        v += sx.weight[a] * sy.weight[b] * sz.weight[c] *
             values[(static_cast<std::size_t>(sx.cell[a]) * r + sy.cell[b]) * r + sz.cell[c]];
  return v;
}

double interpolate_with_gradient(std::span<const double> values, int dim, int r, std::span<const double> p,
                                 std::span<double> gradient) {
  if (dim == 2) {
    const AxisStencil sx = axis_stencil(p[0], r), sy = axis_stencil(p[1], r);
    double v = 0.0, gx = 0.0, gy = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double val = values[static_cast<std::size_t>(sx.cell[a]) * r + sy.cell[b]];
        v += sx.weight[a] * sy.weight[b] * val;
        gx += sx.dweight[a] * sy.weight[b] * val;
        gy += sx.weight[a] * sy.dweight[b] * val;
      }
    gradient[0] = gx;
    gradient[1] = gy;
    return v;
  }
  const AxisStencil sx = axis_stencil(p[0], r), sy = axis_stencil(p[1], r), sz = axis_stencil(p[2], r);
  double v = 0.0, gx = 0.0, gy = 0.0, gz = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const double val = values[(static_cast<std::size_t>(sx.cell[a]) * r + sy.cell[b]) * r + sz.cell[c]];
        v += sx.weight[a] * sy.weight[b] * sz.weight[c] * val;
        gx += sx.dweight[a] * sy.weight[b] * sz.weight[c] * val;
        gy += sx.weight[a] * sy.dweight[b] * sz.weight[c] * val;
        gz += sx.weight[a] * sy.weight[b] * sz.dweight[c] * val;
      }
  gradient[0] = gx;
  gradient[1] = gy;
  gradient[2] = gz;
  return v;
}

void splat(std::span<double> values, int dim, int r, std::span<const double> p, double amount) {
  if (dim == 2) {
    const AxisStencil sx = axis_stencil(p[0], r), sy = axis_stencil(p[1], r);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        values[static_cast<std::size_t>(sx.cell[a]) * r + sy.cell[b]] += amount * sx.weight[a] * sy.weight[b];
    return;
  }
  const AxisStencil sx = axis_stencil(p[0], r), sy = axis_stencil(p[1], r), sz = axis_stencil(p[2], r);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        values[(static_cast<std::size_t>(sx.cell[a]) * r + sy.cell[b]) * r + sz.cell[c]] +=
            amount * sx.weight[a] * sy.weight[b] * sz.weight[c];
}

}  // namespace hybridshape::field
