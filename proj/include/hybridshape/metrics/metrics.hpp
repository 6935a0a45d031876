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
#include <cstdint>
#include <functional>
#include <vector>

#include "hybridshape/field/grid.hpp"
#include "hybridshape/mesh/surface_mesh.hpp"
#include "hybridshape/metrics/nearest.hpp"

namespace hybridshape::metrics {

PointSet to_point_set(const field::OrientedPointCloud& cloud);

// Area-uniform samples with face normals.
PointSet sample_points(const mesh::SurfaceMesh& mesh, std::size_t count, std::uint64_t seed);
// Length-uniform samples with outward edge normals.
PointSet sample_points(const mesh::Contour& contour, std::size_t count, std::uint64_t seed);

// sqrt(area / count) for surfaces, length / count for curves.
double mean_sample_spacing(const mesh::SurfaceMesh& mesh, std::size_t count);
double mean_sample_spacing(const mesh::Contour& contour, std::size_t count);

// Sum of the two directional means; squared distances by default.
double chamfer_distance(const PointSet& a, const PointSet& b, bool squared = true);
double chamfer_distance(const field::OrientedPointCloud& a, const field::OrientedPointCloud& b, bool squared = true);

// Average of the two directional means of 1 - |cos|.
double normal_distance(const PointSet& a, const PointSet& b);
double normal_distance(const field::OrientedPointCloud& a, const field::OrientedPointCloud& b);

// Nearest-rank percentile, p in [0, 100].
double percentile(std::vector<double> values, double p);

// Per-point unsquared distance from each point of `from` to its nearest in `to`.
std::vector<double> directed_distances(const PointSet& from, const NearestIndex& to);

double assd(const PointSet& a, const PointSet& b);
double hausdorff_p(const PointSet& a, const PointSet& b, double p = 90.0);
double normal_consistency(const PointSet& a, const PointSet& b);

// Both meshes are sampled with the same seed.
double assd(const mesh::SurfaceMesh& pred, const mesh::SurfaceMesh& gt, std::size_t samples, std::uint64_t seed);
double hausdorff_p(const mesh::SurfaceMesh& pred, const mesh::SurfaceMesh& gt, double p, std::size_t samples,
                   std::uint64_t seed);
// ASSD over samples outside `excluded`; nearest points are still searched in
// the full opposite sample set.
double assd_excluding(const mesh::SurfaceMesh& pred, const mesh::SurfaceMesh& gt, std::size_t samples,
                      std::uint64_t seed, const std::function<bool(const mesh::Vec3&)>& excluded);
double normal_consistency(const mesh::SurfaceMesh& pred, const mesh::SurfaceMesh& gt, std::size_t samples,
                          std::uint64_t seed);

struct MetricReport {
  double assd = 0.0;
  double hd90 = 0.0;
  double nc = 0.0;
  double si = 0.0;  // of pred
};

MetricReport evaluate(const mesh::SurfaceMesh& pred, const mesh::SurfaceMesh& gt, std::size_t samples,
                      std::uint64_t seed);

}  // namespace hybridshape::metrics
