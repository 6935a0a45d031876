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

#include "hybridshape/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "hybridshape/error.hpp"
#include "hybridshape/mesh/intersect.hpp"
#include "hybridshape/mesh/sampling.hpp"
#include "hybridshape/rng.hpp"

namespace hybridshape::metrics {

using namespace hybridshape::mesh;

namespace {

void require_pair(const PointSet& a, const PointSet& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("empty point set");
  if (a.dim != b.dim) throw InvalidArgument("point dimension mismatch");
}

void require_normals(const PointSet& a, const PointSet& b) {
  if (!a.has_normals() || !b.has_normals()) throw InvalidArgument("point set has no normals");
}

double abs_cos(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return std::abs(s);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// 1 - |cos| (or |cos|) from each point of `from` to its nearest in `to`.
double directed_normal_mean(const PointSet& from, const NearestIndex& to, bool distance) {
  const auto hits = to.query_all(from);
  double s = 0.0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    const double c = abs_cos(from.normal(i), to.normal(hits[i].index));
    s += distance ? 1.0 - c : c;
  }
  return s / static_cast<double>(hits.size());
}

}  // namespace

PointSet to_point_set(const field::OrientedPointCloud& cloud) {
  PointSet out;
  out.dim = cloud.dim();
  out.positions.assign(cloud.positions().begin(), cloud.positions().end());
  out.normals.assign(cloud.normals().begin(), cloud.normals().end());
  return out;
}

PointSet sample_points(const SurfaceMesh& m, std::size_t count, std::uint64_t seed) {
  const auto samples = sample_faces(m, count, seed);
  PointSet out;
  out.dim = 3;
  out.positions.resize(3 * count);
  out.normals.resize(3 * count);
  for (std::size_t i = 0; i < count; ++i) {
    const Vec3 p = sample_position(m, samples[i]);
    const Vec3 n = face_normal(m, samples[i].face);
    std::copy(p.begin(), p.end(), out.positions.begin() + 3 * i);
    std::copy(n.begin(), n.end(), out.normals.begin() + 3 * i);
  }
  return out;
}

PointSet sample_points(const Contour& contour, std::size_t count, std::uint64_t seed) {
  return to_point_set(sample_surface(contour, count, seed));
}

double mean_sample_spacing(const SurfaceMesh& m, std::size_t count) {
  return std::sqrt(surface_area(m) / static_cast<double>(count));
}

double mean_sample_spacing(const Contour& contour, std::size_t count) {
  return contour_length(contour) / static_cast<double>(count);
}

double chamfer_distance(const PointSet& a, const PointSet& b, bool squared) {
  require_pair(a, b);
  const NearestIndex ia(a), ib(b);
  const auto directed = [squared](const PointSet& from, const NearestIndex& to) {
    double s = 0.0;
    for (const auto& h : to.query_all(from)) s += squared ? h.distance_sq : std::sqrt(h.distance_sq);
    return s / static_cast<double>(from.size());
  };
  return directed(a, ib) + directed(b, ia);
}

double chamfer_distance(const field::OrientedPointCloud& a, const field::OrientedPointCloud& b, bool squared) {
  return chamfer_distance(to_point_set(a), to_point_set(b), squared);
}

double normal_distance(const PointSet& a, const PointSet& b) {
  require_pair(a, b);
  require_normals(a, b);
  const NearestIndex ia(a), ib(b);
  return 0.5 * (directed_normal_mean(a, ib, true) + directed_normal_mean(b, ia, true));
}

double normal_distance(const field::OrientedPointCloud& a, const field::OrientedPointCloud& b) {
  return normal_distance(to_point_set(a), to_point_set(b));
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("empty sample");
  if (!(p >= 0.0 && p <= 100.0)) throw InvalidArgument("percentile must lie in [0, 100]");
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
  return values[rank - 1];
}

std::vector<double> directed_distances(const PointSet& from, const NearestIndex& to) {
  const auto hits = to.query_all(from);
  std::vector<double> d(hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i) d[i] = std::sqrt(hits[i].distance_sq);
  return d;
}

double assd(const PointSet& a, const PointSet& b) {
  require_pair(a, b);
  const NearestIndex ia(a), ib(b);
  return 0.5 * (mean(directed_distances(a, ib)) + mean(directed_distances(b, ia)));
}

double hausdorff_p(const PointSet& a, const PointSet& b, double p) {
  require_pair(a, b);
  const NearestIndex ia(a), ib(b);
  return std::max(percentile(directed_distances(a, ib), p), percentile(directed_distances(b, ia), p));
}

double normal_consistency(const PointSet& a, const PointSet& b) {
  require_pair(a, b);
  require_normals(a, b);
  const NearestIndex ia(a), ib(b);
  return 0.5 * (directed_normal_mean(a, ib, false) + directed_normal_mean(b, ia, false));
}

double assd(const SurfaceMesh& pred, const SurfaceMesh& gt, std::size_t samples, std::uint64_t seed) {
  return assd(sample_points(pred, samples, seed), sample_points(gt, samples, seed));
}

double assd_excluding(const SurfaceMesh& pred, const SurfaceMesh& gt, std::size_t samples, std::uint64_t seed,
                      const std::function<bool(const Vec3&)>& excluded) {
  const PointSet a = sample_points(pred, samples, seed), b = sample_points(gt, samples, seed);
  const NearestIndex ia(a), ib(b);
  auto kept_mean = [&](const PointSet& from, const NearestIndex& to) {
    const auto d = directed_distances(from, to);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto p = from.position(i);
      if (excluded({p[0], p[1], p[2]})) continue;
      sum += d[i];
      ++n;
    }
    if (n == 0) throw InvalidArgument("every sample is excluded");
    return sum / static_cast<double>(n);
  };
  return 0.5 * (kept_mean(a, ib) + kept_mean(b, ia));
}

double hausdorff_p(const SurfaceMesh& pred, const SurfaceMesh& gt, double p, std::size_t samples, std::uint64_t seed) {
  return hausdorff_p(sample_points(pred, samples, seed), sample_points(gt, samples, seed), p);
}

double normal_consistency(const SurfaceMesh& pred, const SurfaceMesh& gt, std::size_t samples, std::uint64_t seed) {
  return normal_consistency(sample_points(pred, samples, seed), sample_points(gt, samples, seed));
}

MetricReport evaluate(const SurfaceMesh& pred, const SurfaceMesh& gt, std::size_t samples, std::uint64_t seed) {
  const PointSet a = sample_points(pred, samples, seed), b = sample_points(gt, samples, seed);
  const NearestIndex ia(a), ib(b);
  const auto da = directed_distances(a, ib), db = directed_distances(b, ia);
  MetricReport r;
  r.assd = 0.5 * (mean(da) + mean(db));
  r.hd90 = std::max(percentile(da, 90.0), percentile(db, 90.0));
  r.nc = 0.5 * (directed_normal_mean(a, ib, false) + directed_normal_mean(b, ia, false));
  r.si = self_intersection_ratio(pred);
  return r;
}

}  // namespace hybridshape::metrics
