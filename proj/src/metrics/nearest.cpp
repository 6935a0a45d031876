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

#include "hybridshape/metrics/nearest.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "hybridshape/error.hpp"
#include "hybridshape/parallel.hpp"

namespace hybridshape::metrics {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

NearestIndex::NearestIndex(const PointSet& points, std::size_t leaf_size)
    : dim_(points.dim), leaf_(std::max<std::size_t>(leaf_size, 1)), pos_(points.positions), nrm_(points.normals) {
  if (points.empty()) throw InvalidArgument("empty point set");
  if (dim_ < 1) throw InvalidArgument("point dimension must be positive");
  if (!nrm_.empty() && nrm_.size() != pos_.size()) throw InvalidArgument("normals do not match positions");
  order_.resize(points.size());
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(2 * order_.size() / leaf_ + 2);
  build(0, static_cast<int>(order_.size()));
  packed_.resize(pos_.size());
  for (std::size_t i = 0; i < order_.size(); ++i)
    std::copy_n(pos_.data() + static_cast<std::size_t>(order_[i]) * dim_, dim_, packed_.data() + i * dim_);
}

int NearestIndex::build(int lo, int hi) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({lo, hi, -1, 0.0, -1, -1});
  if (static_cast<std::size_t>(hi - lo) <= leaf_) return id;

  int axis = 0;
  double widest = -1.0;
  for (int k = 0; k < dim_; ++k) {
    double mn = pos_[order_[lo] * dim_ + k], mx = mn;
    for (int i = lo + 1; i < hi; ++i) {
      const double v = pos_[order_[i] * dim_ + k];
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    if (mx - mn > widest) {
      widest = mx - mn;
      axis = k;
    }
  }
  const int mid = lo + (hi - lo) / 2;
  std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi, [&](int a, int b) {
    const double va = pos_[a * dim_ + axis], vb = pos_[b * dim_ + axis];
    return va < vb || (va == vb && a < b);
  });
  const double split = pos_[order_[mid] * dim_ + axis];
  const int left = build(lo, mid);
  const int right = build(mid, hi);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void NearestIndex::search(int id, std::span<const double> p, Nearest& best) const {
  const Node& n = nodes_[id];
  if (n.axis < 0) {
    for (int i = n.lo; i < n.hi; ++i) {
      const double d = squared_distance(p, {packed_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)});
      const auto idx = static_cast<std::size_t>(order_[i]);
      if (d < best.distance_sq || (d == best.distance_sq && idx < best.index)) best = {idx, d};
    }
    return;
  }
  // left holds values <= split, right holds values >= split
  const double diff = p[n.axis] - n.split;
  const int near = diff < 0.0 ? n.left : n.right;
  const int far = diff < 0.0 ? n.right : n.left;
  search(near, p, best);
  if (diff * diff <= best.distance_sq) search(far, p, best);
}

Nearest NearestIndex::query(std::span<const double> p) const {
  if (p.size() != static_cast<std::size_t>(dim_)) throw InvalidArgument("query dimension mismatch");
  Nearest best{order_.size(), std::numeric_limits<double>::infinity()};
  search(0, p, best);
  return best;
}

std::vector<Nearest> NearestIndex::query_all(const PointSet& queries) const {
  if (queries.dim != dim_) throw InvalidArgument("query dimension mismatch");
  std::vector<Nearest> out(queries.size());
  parallel_for(out.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = query(queries.position(i));
  }, 512);
  return out;
}

Nearest nearest_linear(const PointSet& points, std::span<const double> p) {
  if (points.empty()) throw InvalidArgument("empty point set");
  Nearest best{0, squared_distance(p, points.position(0))};
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d = squared_distance(p, points.position(i));
    if (d < best.distance_sq) best = {i, d};
  }
  return best;
}

}  // namespace hybridshape::metrics
