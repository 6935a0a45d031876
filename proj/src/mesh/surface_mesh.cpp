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

#include "hybridshape/mesh/surface_mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>

#include "hybridshape/error.hpp"

namespace hybridshape::mesh {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

void SurfaceMesh::validate() const {
  const int n = static_cast<int>(vertices.size());
  for (const auto& f : faces)
    for (int v : f)
      if (v < 0 || v >= n) throw InvalidArgument("face index out of range");
  if (!normals.empty() && normals.size() != vertices.size())
    throw InvalidArgument("vertex normal count differs from vertex count");
}

std::size_t Contour::vertex_count() const {
  std::size_t n = 0;
  for (const auto& l : loops) n += l.size();
  return n;
}

Vec3 face_normal(const SurfaceMesh& mesh, std::size_t face) {
  const auto& f = mesh.faces[face];
  const Vec3 c = cross(mesh.vertices[f[1]] - mesh.vertices[f[0]], mesh.vertices[f[2]] - mesh.vertices[f[0]]);
  const double len = norm(c);
  return len > 0.0 ? (1.0 / len) * c : Vec3{0.0, 0.0, 0.0};
}

double face_area(const SurfaceMesh& mesh, std::size_t face) {
  const auto& f = mesh.faces[face];
  return 0.5 * norm(cross(mesh.vertices[f[1]] - mesh.vertices[f[0]], mesh.vertices[f[2]] - mesh.vertices[f[0]]));
}

double surface_area(const SurfaceMesh& mesh) {
  double a = 0.0;
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) a += face_area(mesh, i);
  return a;
}

double signed_volume(const SurfaceMesh& mesh) {
  double v = 0.0;
  for (const auto& f : mesh.faces)
    v += dot(mesh.vertices[f[0]], cross(mesh.vertices[f[1]], mesh.vertices[f[2]]));
  return v / 6.0;
}

double contour_length(const Contour& contour) {
  double len = 0.0;
  for (const auto& loop : contour.loops)
    for (std::size_t i = 0; i < loop.size(); ++i) len += norm(loop[(i + 1) % loop.size()] - loop[i]);
  return len;
}

bool is_watertight(const SurfaceMesh& mesh) {
  if (mesh.faces.empty()) return false;
  // Count each directed edge; a closed consistently oriented surface uses
  // every edge once per direction.
  std::unordered_map<std::uint64_t, int> balance;
  balance.reserve(mesh.faces.size() * 3);
  for (const auto& f : mesh.faces)
    for (int e = 0; e < 3; ++e) {
      const int a = f[e], b = f[(e + 1) % 3];
      if (a == b) return false;
      auto& slot = balance[edge_key(a, b)];
      const int bit = a < b ? 1 : 16;
      if (slot & (bit | (bit << 1))) {
        if (slot & (bit << 1)) return false;
        slot |= bit << 1;
        continue;
      }
      slot |= bit;
    }
  for (const auto& [key, slot] : balance)
    if (slot != (1 | 16)) return false;
  return true;
}

long euler_characteristic(const SurfaceMesh& mesh) {
  std::vector<char> used(mesh.vertices.size(), 0);
  std::unordered_map<std::uint64_t, char> edges;
  edges.reserve(mesh.faces.size() * 2);
  for (const auto& f : mesh.faces)
    for (int e = 0; e < 3; ++e) {
      used[f[e]] = 1;
      edges.emplace(edge_key(f[e], f[(e + 1) % 3]), 0);
    }
  const long v = std::count(used.begin(), used.end(), 1);
  return v - static_cast<long>(edges.size()) + static_cast<long>(mesh.faces.size());
}

std::vector<int> face_components(const SurfaceMesh& mesh, int* count) {
  std::vector<int> parent(mesh.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& f : mesh.faces) {
    const int r0 = find_root(parent, f[0]);
    for (int k = 1; k < 3; ++k) {
      const int rk = find_root(parent, f[k]);
      if (rk != r0) parent[std::max(rk, r0)] = std::min(rk, r0);
    }
  }
  std::map<int, int> label_of_root;
  std::vector<int> labels(mesh.faces.size());
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const int root = find_root(parent, mesh.faces[i][0]);
    auto it = label_of_root.try_emplace(root, static_cast<int>(label_of_root.size())).first;
    labels[i] = it->second;
  }
  if (count) *count = static_cast<int>(label_of_root.size());
  return labels;
}

long genus(const SurfaceMesh& mesh) {
  if (!is_watertight(mesh)) throw InvalidArgument("open surface");
  int components = 0;
  face_components(mesh, &components);
  if (components != 1) throw InvalidArgument("genus requires a connected surface");
  return (2 - euler_characteristic(mesh)) / 2;
}

SurfaceMesh compact(const SurfaceMesh& mesh) {
  std::vector<int> remap(mesh.vertices.size(), -1);
  SurfaceMesh out;
  out.faces.reserve(mesh.faces.size());
  for (const auto& f : mesh.faces) {
    Triangle t;
    for (int k = 0; k < 3; ++k) {
      int& slot = remap[f[k]];
      if (slot < 0) {
        slot = static_cast<int>(out.vertices.size());
        out.vertices.push_back(mesh.vertices[f[k]]);
        if (!mesh.normals.empty()) out.normals.push_back(mesh.normals[f[k]]);
      }
      t[k] = slot;
    }
    out.faces.push_back(t);
  }
  return out;
}

SurfaceMesh largest_component(const SurfaceMesh& mesh) {
  int count = 0;
  const auto labels = face_components(mesh, &count);
  if (count <= 1) return compact(mesh);
  std::vector<std::size_t> sizes(count, 0);
  for (int l : labels) ++sizes[l];
  const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  SurfaceMesh picked;
  picked.vertices = mesh.vertices;
  picked.normals = mesh.normals;
  for (std::size_t i = 0; i < mesh.faces.size(); ++i)
    if (labels[i] == best) picked.faces.push_back(mesh.faces[i]);
  return compact(picked);
}

std::vector<Vec3> vertex_normals(const SurfaceMesh& mesh) {
  std::vector<Vec3> n(mesh.vertices.size(), Vec3{0.0, 0.0, 0.0});
  for (const auto& f : mesh.faces) {
    const Vec3 c = cross(mesh.vertices[f[1]] - mesh.vertices[f[0]], mesh.vertices[f[2]] - mesh.vertices[f[0]]);
    for (int k = 0; k < 3; ++k) n[f[k]] = n[f[k]] + c;
  }
  for (auto& v : n) {
    const double len = norm(v);
    if (len > 0.0) v = (1.0 / len) * v;
  }
  return n;
}

SurfaceMesh transformed(const SurfaceMesh& mesh, const std::array<double, 9>& rot, const Vec3& t) {
  SurfaceMesh out = mesh;
  auto apply = [&](const Vec3& v) {
    return Vec3{rot[0] * v[0] + rot[1] * v[1] + rot[2] * v[2], rot[3] * v[0] + rot[4] * v[1] + rot[5] * v[2],
                rot[6] * v[0] + rot[7] * v[1] + rot[8] * v[2]};
  };
  for (auto& v : out.vertices) v = apply(v) + t;
  for (auto& n : out.normals) n = apply(n);
  return out;
}

SurfaceMesh merged(const SurfaceMesh& a, const SurfaceMesh& b) {
  SurfaceMesh out = a;
  const int offset = static_cast<int>(a.vertices.size());
  out.vertices.insert(out.vertices.end(), b.vertices.begin(), b.vertices.end());
  for (const auto& f : b.faces) out.faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
  if (a.normals.empty() || b.normals.empty()) {
    out.normals.clear();
  } else {
    out.normals.insert(out.normals.end(), b.normals.begin(), b.normals.end());
  }
  return out;
}

}  // namespace hybridshape::mesh
