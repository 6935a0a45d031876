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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace hybridshape::field {

// Uniform scalar field on the unit square/cube. Cell i along an axis has its
// center at (i + 0.5) / r. Values are row-major with axis 0 slowest.
class ScalarGrid {
 public:
  ScalarGrid() = default;
  ScalarGrid(int dim, int resolution);
  ScalarGrid(int dim, int resolution, std::vector<double> values);

  int dim() const { return dim_; }
  int resolution() const { return res_; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double at(int i, int j) const { return values_[index(i, j)]; }
  double at(int i, int j, int k) const { return values_[index(i, j, k)]; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * res_ + j; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * res_ + j) * res_ + k;
  }

  bool all_finite() const;
  // Throws InvalidArgument naming `what` if any value is NaN/Inf.
  void require_finite(const char* what) const;

  bool same_shape(const ScalarGrid& other) const {
    return dim_ == other.dim_ && res_ == other.res_;
  }

  double min_value() const;
  double max_value() const;

 private:
  int dim_ = 0;
  int res_ = 0;
  std::vector<double> values_;
};

// Vector field with `dim` components per cell, stored as one plane per
// component (component slowest, then the ScalarGrid order).
class VectorGrid {
 public:
  VectorGrid() = default;
  VectorGrid(int dim, int resolution);

  int dim() const { return dim_; }
  int resolution() const { return res_; }
  std::size_t cells() const { return cells_; }

  std::span<const double> component(int c) const { return {values_.data() + c * cells_, cells_}; }
  std::span<double> component(int c) { return {values_.data() + c * cells_, cells_}; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool all_finite() const;

 private:
  int dim_ = 0;
  int res_ = 0;
  std::size_t cells_ = 0;
  std::vector<double> values_;
};

// Points in [0,1]^d with one normal each, stored interleaved (x0 y0 [z0] x1 ...).
class OrientedPointCloud {
 public:
  OrientedPointCloud() = default;
  // Clamps positions into [0,1]^d and rescales normals to unit length.
  OrientedPointCloud(int dim, std::vector<double> positions, std::vector<double> normals);

  // Keeps normals exactly as given (positions are still clamped). Used where
  // the normal magnitude is itself a variable, e.g. gradient checks.
  static OrientedPointCloud with_raw_normals(int dim, std::vector<double> positions,
                                             std::vector<double> normals);

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : positions_.size() / dim_; }
  bool empty() const { return positions_.empty(); }

  std::span<const double> positions() const { return positions_; }
  std::span<const double> normals() const { return normals_; }
  std::span<const double> position(std::size_t i) const { return {positions_.data() + i * dim_, static_cast<std::size_t>(dim_)}; }
  std::span<const double> normal(std::size_t i) const { return {normals_.data() + i * dim_, static_cast<std::size_t>(dim_)}; }

 private:
  OrientedPointCloud(int dim, std::vector<double> positions, std::vector<double> normals, bool normalize);

  int dim_ = 0;
  std::vector<double> positions_;
  std::vector<double> normals_;
};

// Per-axis multilinear stencil for a point on the periodic grid: two cells
// per axis, weights (1 - f, f), and the weight derivative d w / d p.
struct AxisStencil {
  std::array<int, 2> cell;
  std::array<double, 2> weight;
  std::array<double, 2> dweight;
};

// Cell-center convention x = p * r - 0.5. A point on a cell boundary takes
// its stencil (and derivative) from the left cell.
AxisStencil axis_stencil(double p, int resolution);

// Multilinear interpolation with periodic wrap. `p` has grid.dim() entries.
double interpolate(const ScalarGrid& grid, std::span<const double> p);
double interpolate(std::span<const double> values, int dim, int resolution, std::span<const double> p);

// Interpolated value and its spatial gradient (gradient has dim entries).
double interpolate_with_gradient(std::span<const double> values, int dim, int resolution,
                                 std::span<const double> p, std::span<double> gradient);

// Adds `amount` times the multilinear weights of p into `values`.
void splat(std::span<double> values, int dim, int resolution, std::span<const double> p, double amount);

}  // namespace hybridshape::field
