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

#include "hybridshape/topo/topology.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hybridshape/error.hpp"
#include "hybridshape/field/filters.hpp"
#include "hybridshape/mesh/intersect.hpp"
#include "hybridshape/mesh/marching.hpp"
#include "hybridshape/mesh/voxel.hpp"

namespace hybridshape::topo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Squared distance transform of one line (lower envelope of parabolas).
void edt_line(std::vector<double>& f, std::vector<double>& out, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  int first = 0;
  while (first < n && f[first] == kInf) ++first;
  if (first == n) {
    out.assign(n, kInf);
    return;
  }
  v[0] = first;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = first + 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    double s;
    while (true) {
      const int p = v[k];
      s = ((f[q] + q * static_cast<double>(q)) - (f[p] + p * static_cast<double>(p))) / (2.0 * (q - p));
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    if (s <= z[k]) {
      v[k] = q;
    } else {
      ++k;
      v[k] = q;
      z[k] = s;
    }
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    out[q] = dq * dq + f[v[k]];
  }
}

// Squared distance from every cell to the nearest cell where `seed` holds.
std::vector<double> squared_edt(const field::ScalarGrid& mask, bool seed_value) {
  const int d = mask.dim(), r = mask.resolution();
  std::vector<double> g(mask.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = (mask[i] > 0.5) == seed_value ? 0.0 : kInf;
  std::vector<double> line(r), out(r), z(r + 1);
  std::vector<int> v(r);
  for (int axis = 0; axis < d; ++axis) {
    std::size_t stride = 1;
    for (int a = axis + 1; a < d; ++a) stride *= r;
    for (std::size_t start = 0; start < g.size(); ++start) {
      if ((start / stride) % r != 0) continue;
      for (int q = 0; q < r; ++q) line[q] = g[start + q * stride];
      edt_line(line, out, v, z);
      for (int q = 0; q < r; ++q) g[start + q * stride] = out[q];
    }
  }
  return g;
}

bool genus_zero(const mesh::SurfaceMesh& m) {
  if (m.faces.empty() || !mesh::is_watertight(m)) return false;
  int comps = 0;
  mesh::face_components(m, &comps);
  return comps == 1 && mesh::euler_characteristic(m) == 2;
}

}  // namespace

field::ScalarGrid exact_signed_distance(const field::ScalarGrid& mask) {
  if (mask.dim() != 2 && mask.dim() != 3) throw InvalidArgument("mask must be 2D or 3D");
  bool any_in = false, any_out = false;
  for (double x : mask.values()) {
    if (x != 0.0 && x != 1.0) throw InvalidArgument("mask values must be 0 or 1");
    (x > 0.5 ? any_in : any_out) = true;
  }
  if (!any_in || !any_out) throw InvalidArgument("no boundary");
  const auto to_out = squared_edt(mask, false), to_in = squared_edt(mask, true);
  field::ScalarGrid sdf(mask.dim(), mask.resolution());
  for (std::size_t i = 0; i < sdf.size(); ++i)
    sdf[i] = mask[i] > 0.5 ? std::sqrt(to_out[i]) - 0.5 : 0.5 - std::sqrt(to_in[i]);
  return sdf;
}

field::ScalarGrid signed_distance_grid(const field::ScalarGrid& mask, double smooth_std) {
  if (!(smooth_std > 0.0)) throw InvalidArgument("smoothing std must be positive");
  return field::gaussian_blur(exact_signed_distance(mask), 7, smooth_std);
}

TopoResult correct_topology(const field::ScalarGrid& chi, const TopoConfig& cfg, const mesh::SurfaceMesh& defective) {
  if (chi.dim() != 3) throw InvalidArgument("topology correction needs a 3D grid");
  if (cfg.attempts < 1) throw InvalidArgument("at least one attempt is required");
  if (defective.faces.empty()) throw InvalidArgument("empty surface");
  chi.require_finite("chi");

  const auto mask = mesh::largest_component(mesh::binarize(chi, cfg.threshold));
  const auto sdf = signed_distance_grid(mask, cfg.smooth_std);

  TopoResult out;
  out.euler_before = mesh::euler_characteristic(defective);
  double tau = cfg.tau;
  const double dir = tau < 0.0 ? -1.0 : 1.0;
  for (int attempt = 0; attempt < cfg.attempts; ++attempt) {
    if (attempt > 0) tau += dir * cfg.tau_step;
    out.attempts = attempt + 1;
    // inside is sdf > -tau, so positive tau grows the solid
    mesh::SurfaceMesh m = mesh::marching_cubes(sdf, -tau);
    if (!m.faces.empty()) m = mesh::largest_component(m);
    if (!genus_zero(m)) continue;
    out.tau = tau;
    out.offset_mesh = std::move(m);
    break;
  }
  if (out.offset_mesh.faces.empty()) {
    std::ostringstream msg;
    msg << "topology correction failed at tau=" << tau;
    throw TopologyError(msg.str());
  }
  out.si_before_registration = mesh::self_intersection_ratio(out.offset_mesh);
  auto reg = flow::register_surfaces(out.offset_mesh, defective, cfg.registration);
  out.mesh = flow::to_mesh(reg.deformed);
  out.losses = std::move(reg.losses);
  out.initial_chamfer = reg.initial_chamfer;
  out.final_chamfer = reg.final_chamfer;
  out.mesh.normals = mesh::vertex_normals(out.mesh);
  out.euler_after = mesh::euler_characteristic(out.mesh);
  out.si_after_registration = mesh::self_intersection_ratio(out.mesh);
  return out;
}

}  // namespace hybridshape::topo
