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
#include <span>
#include <vector>

namespace hybridshape::metrics {

// Positions and optional normals, row-major with `dim` columns. Unlike
// OrientedPointCloud nothing is clamped, so rigid motions stay exact.
struct PointSet {
  int dim = 0;
  std::vector<double> positions;
  std::vector<double> normals;

  std::size_t size() const { return dim == 0 ? 0 : positions.size() / dim; }
  bool empty() const { return positions.empty(); }
  bool has_normals() const { return !normals.empty(); }
  std::span<const double> position(std::size_t i) const { return {positions.data() + i * dim, static_cast<std::size_t>(dim)}; }
  std::span<const double> normal(std::size_t i) const { return {normals.data() + i * dim, static_cast<std::size_t>(dim)}; }
};

struct Nearest {
  std::size_t index = 0;
  double distance_sq = 0.0;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

// Exact nearest neighbour; equal distances resolve to the smallest index.
class NearestIndex {
 public:
  explicit NearestIndex(const PointSet& points, std::size_t leaf_size = 8);

  int dim() const { return dim_; }
  std::size_t size() const { return order_.size(); }

  Nearest query(std::span<const double> p) const;
  std::vector<Nearest> query_all(const PointSet& queries) const;

  std::span<const double> position(std::size_t i) const { return {pos_.data() + i * dim_, static_cast<std::size_t>(dim_)}; }
  std::span<const double> normal(std::size_t i) const { return {nrm_.data() + i * dim_, static_cast<std::size_t>(dim_)}; }
  bool has_normals() const { return !nrm_.empty(); }

 private:
  struct Node {
    int lo, hi;      // range into order_
    int axis;        // -1 for leaves
    double split;
    int left, right;
  };

  int build(int lo, int hi);
  void search(int node, std::span<const double> p, Nearest& best) const;

  int dim_;
  std::size_t leaf_;
  std::vector<double> pos_, nrm_;
  std::vector<int> order_;
  std::vector<double> packed_;  // positions in tree order
  std::vector<Node> nodes_;
};

Nearest nearest_linear(const PointSet& points, std::span<const double> p);

}  // namespace hybridshape::metrics
