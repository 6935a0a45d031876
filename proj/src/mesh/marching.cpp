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

#include "hybridshape/mesh/marching.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hybridshape/error.hpp"
#include "hybridshape/mesh/intersect.hpp"

namespace hybridshape::mesh {

namespace {

// Crossings closer than this (cell fraction) to a grid node are held at this
// distance so that every vertex keeps its own edge; the sliver pass then
// merges them wherever that keeps the surface manifold.
constexpr double kWeld = 1e-12;
constexpr double kSliverArea = 1e-14;

// Cube corner c has offset (c & 1, (c >> 1) & 1, (c >> 2) & 1).
struct CubeGeometry {
  std::array<std::array<int, 2>, 12> edge_corners{};
  std::array<int, 12> edge_axis{};
  std::array<std::array<int, 4>, 6> face_corners{};  // cyclic
  std::array<std::array<int, 4>, 6> face_edges{};    // edge k joins corners k, k+1
  std::array<Vec3, 6> face_normal{};
  std::array<std::array<bool, 12>, 12> share_face{};

  CubeGeometry() {
    int e = 0;
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 8; ++c)
        if (!(c >> a & 1)) {
          edge_corners[e] = {c, c | (1 << a)};
          edge_axis[e] = a;
          ++e;
        }
    for (int a = 0; a < 3; ++a)
      for (int s = 0; s < 2; ++s) {
        const int f = 2 * a + s;
        const int u = a == 0 ? 1 : 0, v = a == 2 ? 1 : 2;
        const int base = s << a;
        face_corners[f] = {base, base | 1 << u, base | 1 << u | 1 << v, base | 1 << v};
        for (int k = 0; k < 4; ++k) face_edges[f][k] = edge_of(face_corners[f][k], face_corners[f][(k + 1) % 4]);
        face_normal[f] = {0.0, 0.0, 0.0};
        face_normal[f][a] = s ? 1.0 : -1.0;
      }
    for (int f = 0; f < 6; ++f)
      for (int x : face_edges[f])
        for (int y : face_edges[f]) share_face[x][y] = true;
  }

  int edge_of(int c0, int c1) const {
    for (int e = 0; e < 12; ++e)
      if ((edge_corners[e][0] == c0 && edge_corners[e][1] == c1) ||
          (edge_corners[e][0] == c1 && edge_corners[e][1] == c0))
        return e;
    return -1;
  }

  static Vec3 corner(int c) { return {double(c & 1), double(c >> 1 & 1), double(c >> 2 & 1)}; }
  Vec3 midpoint(int e) const { return 0.5 * (corner(edge_corners[e][0]) + corner(edge_corners[e][1])); }
};

const CubeGeometry& cube() {
  static const CubeGeometry g;
  return g;
}

bool face_ambiguous(int mask, const std::array<int, 4>& q) {
  const bool a = mask >> q[0] & 1, b = mask >> q[1] & 1, c = mask >> q[2] & 1, d = mask >> q[3] & 1;
  return a == c && b == d && a != b;
}

// Edge ids of one loop in canonical order: starting at the smallest id and
// continuing toward its smaller neighbour. `reversed` records whether this
// runs against the surface orientation. The canonical order makes the
// triangulation of a loop independent of its direction.
struct Loop {
  std::vector<std::int8_t> edges;
  bool reversed = false;
};
using LoopSet = std::vector<Loop>;

Loop canonical(std::vector<std::int8_t> cycle) {
  const auto start = std::min_element(cycle.begin(), cycle.end()) - cycle.begin();
  std::rotate(cycle.begin(), cycle.begin() + start, cycle.end());
  Loop loop;
  if (cycle.size() > 2 && cycle.back() < cycle[1]) {
    std::reverse(cycle.begin() + 1, cycle.end());
    loop.reversed = true;
  }
  loop.edges = std::move(cycle);
  return loop;
}

LoopSet build_loops(int mask, int face_bits) {
  const CubeGeometry& g = cube();
  std::array<int, 12> next;
  next.fill(-1);
  auto add_segment = [&](int f, int e0, int e1, int ref_corner, bool ref_inside) {
    const Vec3 p = g.midpoint(e0), q = g.midpoint(e1);
    const double s = dot(cross(q - p, CubeGeometry::corner(ref_corner) - p), g.face_normal[f]);
    // Inside lies to the right of the segment seen from outside the cube.
    const bool keep = ref_inside ? s < 0.0 : s > 0.0;
    if (keep) next[e0] = e1;
    else next[e1] = e0;
  };
  for (int f = 0; f < 6; ++f) {
    const auto& q = g.face_corners[f];
    const auto& fe = g.face_edges[f];
    int inside = 0;
    for (int c : q) inside += mask >> c & 1;
    if (inside == 0 || inside == 4) continue;
    if (face_ambiguous(mask, q)) {
      const bool connect_inside = face_bits >> f & 1;
      for (int k = 0; k < 4; ++k) {
        const bool in = mask >> q[k] & 1;
        if (in == connect_inside) continue;  // this corner is cut off
        add_segment(f, fe[(k + 3) % 4], fe[k], q[k], in);
      }
      continue;
    }
    std::array<int, 2> crossed{};
    int n = 0, ref = -1;
    for (int k = 0; k < 4; ++k) {
      if ((mask >> q[k] & 1) != (mask >> q[(k + 1) % 4] & 1)) crossed[n++] = fe[k];
      if (mask >> q[k] & 1) ref = q[k];
    }
    add_segment(f, crossed[0], crossed[1], ref, true);
  }
  LoopSet loops;
  std::array<bool, 12> used{};
  for (int e = 0; e < 12; ++e) {
    if (next[e] < 0 || used[e]) continue;
    std::vector<std::int8_t> loop;
    for (int x = e; !used[x]; x = next[x]) {
      if (next[x] < 0) throw std::logic_error("marching cubes table: open loop");
      used[x] = true;
      loop.push_back(static_cast<std::int8_t>(x));
    }
    loops.push_back(canonical(std::move(loop)));
  }
  return loops;
}

const std::vector<LoopSet>& loop_table() {
  static const std::vector<LoopSet> table = [] {
    std::vector<LoopSet> t(256 * 64);
    for (int mask = 1; mask < 255; ++mask)
      for (int bits = 0; bits < 64; ++bits) {
        bool canonical = true;
        for (int f = 0; f < 6; ++f)
          if ((bits >> f & 1) && !face_ambiguous(mask, cube().face_corners[f])) canonical = false;
        if (canonical) t[mask | bits << 8] = build_loops(mask, bits);
      }
    return t;
  }();
  return table;
}

double tri_area(const Vec3& a, const Vec3& b, const Vec3& c) { return 0.5 * norm(cross(b - a, c - a)); }

// Minimal-area triangulation of a loop whose chords never lie on a cube face.
// Returns false, emitting nothing, when every triangulation needs such a chord.
bool triangulate_loop(const std::vector<int>& ids, const std::vector<int>& edges, const std::vector<Vec3>& verts,
                      std::vector<Triangle>& out) {
  const int n = static_cast<int>(ids.size());
  if (n < 3) return true;
  if (n == 3) {
    out.push_back({ids[0], ids[1], ids[2]});
    return true;
  }
  const CubeGeometry& g = cube();
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto chord_ok = [&](int i, int j) {
    return j == i + 1 || (i == 0 && j == n - 1) || !g.share_face[edges[i]][edges[j]];
  };
  std::array<std::array<double, 12>, 12> cost;
  std::array<std::array<int, 12>, 12> split;
  for (int len = 1; len < n; ++len)
    for (int i = 0; i + len < n; ++i) {
      const int j = i + len;
      cost[i][j] = len == 1 ? 0.0 : inf;
      split[i][j] = -1;
      if (len == 1 || !chord_ok(i, j)) continue;
      for (int k = i + 1; k < j; ++k) {
        if (cost[i][k] == inf || cost[k][j] == inf) continue;
        const double c = cost[i][k] + cost[k][j] + tri_area(verts[ids[i]], verts[ids[k]], verts[ids[j]]);
        if (c < cost[i][j]) {
          cost[i][j] = c;
          split[i][j] = k;
        }
      }
    }
  if (cost[0][n - 1] == inf) return false;
  std::vector<std::array<int, 2>> stack{{0, n - 1}};
  while (!stack.empty()) {
    const auto [i, j] = stack.back();
    stack.pop_back();
    if (j - i < 2) continue;
    const int k = split[i][j];
    out.push_back({ids[i], ids[k], ids[j]});
    stack.push_back({i, k});
    stack.push_back({k, j});
  }
  return true;
}

double trilinear(const std::array<double, 8>& val, const Vec3& p) {
  double v = 0.0;
  for (int c = 0; c < 8; ++c)
    v += val[c] * (c & 1 ? p[0] : 1.0 - p[0]) * (c >> 1 & 1 ? p[1] : 1.0 - p[1]) * (c >> 2 & 1 ? p[2] : 1.0 - p[2]);
  return v;
}

// A point on the trilinear level set inside the cube: bisect from `start`
// (cube-local coordinates) toward the nearest corner of the opposite sign,
// pulled slightly into the cube.
Vec3 interior_point(const std::array<double, 8>& val, double iso, const Vec3& start) {
  constexpr double margin = 1e-3;
  const double f0 = trilinear(val, start) - iso;
  if (f0 == 0.0) return start;
  std::array<int, 8> order;
  std::iota(order.begin(), order.end(), 0);
  auto target = [&](int c) {
    Vec3 q = CubeGeometry::corner(c);
    for (double& x : q) x = margin + (1.0 - 2.0 * margin) * x;
    return q;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return norm(target(a) - start) < norm(target(b) - start); });
  for (int c : order) {
    const Vec3 end = target(c);
    if ((trilinear(val, end) - iso > 0.0) == (f0 > 0.0)) continue;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double f = trilinear(val, start + mid * (end - start)) - iso;
      if (f == 0.0) return start + mid * (end - start);
      if ((f > 0.0) == (f0 > 0.0)) lo = mid;
      else hi = mid;
    }
    return start + (0.5 * (lo + hi)) * (end - start);
  }
  return start;
}

Vec3 raw_normal(const std::vector<Vec3>& v, const Triangle& f) {
  return cross(v[f[1]] - v[f[0]], v[f[2]] - v[f[0]]);
}

// Edge collapses on a closed manifold. A collapse is taken only if it passes
// the link condition (topology unchanged) and the moved triangles stay clear
// of every triangle in the surrounding cells (no new intersections).
// Triangles below the sliver area and edges below the weld length are
// collapsed; the surviving vertex keeps its position.
class Collapser {
 public:
  Collapser(std::vector<Vec3>& verts, std::vector<Triangle>& faces, int resolution)
      : verts_(verts), faces_(faces), res_(resolution), alive_(faces.size(), 1), stamp_(faces.size(), 0),
        incident_(verts.size()) {
    for (std::size_t f = 0; f < faces.size(); ++f) {
      for (int v : faces[f]) incident_[v].push_back(static_cast<int>(f));
      for_cells(faces[f], [&](std::int64_t k) { bucket_[k].push_back(static_cast<int>(f)); });
    }
  }

  void run() {
    std::vector<int> queue;
    for (std::size_t f = 0; f < faces_.size(); ++f)
      if (needs_collapse(static_cast<int>(f))) queue.push_back(static_cast<int>(f));
    for (int round = 0; round < 8 && !queue.empty(); ++round) {
      std::vector<int> next;
      for (int f : queue) {
        if (!alive_[f] || !needs_collapse(f)) continue;
        const Triangle t = faces_[f];
        std::array<int, 3> order{0, 1, 2};
        auto len = [&](int e) { return norm(verts_[t[(e + 1) % 3]] - verts_[t[e]]); };
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return len(x) < len(y); });
        for (int e : order) {
          const int a = std::min(t[e], t[(e + 1) % 3]), b = std::max(t[e], t[(e + 1) % 3]);
          if (collapse(a, b, next) || collapse(b, a, next)) break;
        }
      }
      queue.clear();
      for (int f : next)
        if (alive_[f] && needs_collapse(f)) queue.push_back(f);
    }
  }

  bool alive(std::size_t f) const { return alive_[f]; }

 private:
  static std::int64_t key(const std::array<int, 3>& c) {
    return (static_cast<std::int64_t>(c[0]) << 42) ^ (static_cast<std::int64_t>(c[1]) << 21) ^ c[2];
  }

  bool needs_collapse(int f) const {
    const Triangle& t = faces_[f];
    if (tri_area(verts_[t[0]], verts_[t[1]], verts_[t[2]]) < kSliverArea) return true;
    for (int e = 0; e < 3; ++e)
      if (norm(verts_[t[(e + 1) % 3]] - verts_[t[e]]) < kWeld) return true;
    return false;
  }

  std::vector<int> neighbours(int v) const {
    std::vector<int> out;
    for (int f : incident_[v])
      for (int w : faces_[f])
        if (w != v) out.push_back(w);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Visits the hash cells overlapped by the bounding box of t.
  template <class Visit>
  void for_cells(const Triangle& t, Visit&& visit) const {
    std::array<int, 3> lo, hi;
    for (int k = 0; k < 3; ++k) {
      double mn = verts_[t[0]][k], mx = mn;
      for (int v : t) {
        mn = std::min(mn, verts_[v][k]);
        mx = std::max(mx, verts_[v][k]);
      }
      lo[k] = static_cast<int>(std::floor(mn * res_));
      hi[k] = static_cast<int>(std::floor(mx * res_));
    }
    for (int x = lo[0]; x <= hi[0]; ++x)
      for (int y = lo[1]; y <= hi[1]; ++y)
        for (int z = lo[2]; z <= hi[2]; ++z) visit(key({x, y, z}));
  }

  bool clear_of_neighbours(const Triangle& moved, int f) {
    const Tri3 tri{verts_[moved[0]], verts_[moved[1]], verts_[moved[2]]};
    ++epoch_;
    bool clear = true;
    for_cells(moved, [&](std::int64_t k) {
      if (!clear) return;
      const auto it = bucket_.find(k);
      if (it == bucket_.end()) return;
      for (int g : it->second) {
        if (!alive_[g] || g == f || stamp_[g] == epoch_) continue;
        stamp_[g] = epoch_;
        const Triangle& other = faces_[g];
        bool shared = false;
        for (int x : moved)
          for (int y : other) shared |= x == y;
        if (shared) continue;
        if (triangles_intersect(tri, {verts_[other[0]], verts_[other[1]], verts_[other[2]]})) {
          clear = false;
          return;
        }
      }
    });
    return clear;
  }

  // Keeps a, removes b.
  bool collapse(int a, int b, std::vector<int>& touched) {
    std::vector<int> shared_faces, opposite;
    for (int f : incident_[a])
      for (int w : faces_[f])
        if (w == b) {
          shared_faces.push_back(f);
          for (int x : faces_[f])
            if (x != a && x != b) opposite.push_back(x);
        }
    if (shared_faces.size() != 2) return false;
    std::sort(opposite.begin(), opposite.end());
    const auto na = neighbours(a), nb = neighbours(b);
    std::vector<int> common;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
    if (common != opposite) return false;
    if (na.size() + nb.size() - common.size() <= 4) return false;  // would reach a tetrahedron
    for (int f : incident_[b]) {
      if (f == shared_faces[0] || f == shared_faces[1]) continue;
      Triangle moved = faces_[f];
      for (int& w : moved)
        if (w == b) w = a;
      const Vec3 before = raw_normal(verts_, faces_[f]), after = raw_normal(verts_, moved);
      if (0.5 * norm(before) >= kSliverArea && dot(before, after) <= 0.0) return false;
    }
    alive_[shared_faces[0]] = alive_[shared_faces[1]] = 0;
    for (int f : incident_[b]) {
      if (!alive_[f]) continue;
      Triangle moved = faces_[f];
      for (int& w : moved)
        if (w == b) w = a;
      if (!clear_of_neighbours(moved, f)) {
        alive_[shared_faces[0]] = alive_[shared_faces[1]] = 1;
        return false;
      }
    }
    std::vector<int> merged;
    for (int f : incident_[a])
      if (alive_[f]) merged.push_back(f);
    for (int f : incident_[b]) {
      if (!alive_[f]) continue;
      for (int& w : faces_[f])
        if (w == b) w = a;
      for_cells(faces_[f], [&](std::int64_t k) { bucket_[k].push_back(f); });
      merged.push_back(f);
    }
    for (int x : opposite) {
      auto& list = incident_[x];
      list.erase(std::remove_if(list.begin(), list.end(), [&](int f) { return !alive_[f]; }), list.end());
    }
    incident_[a] = merged;
    incident_[b].clear();
    touched.insert(touched.end(), merged.begin(), merged.end());
    return true;
  }

  std::vector<Vec3>& verts_;
  std::vector<Triangle>& faces_;
  int res_;
  std::vector<char> alive_;
  std::vector<unsigned> stamp_;
  unsigned epoch_ = 0;
  std::vector<std::vector<int>> incident_;
  std::unordered_map<std::int64_t, std::vector<int>> bucket_;
};

SurfaceMesh cleanup(std::vector<Vec3> verts, std::vector<Triangle> faces, int resolution) {
  Collapser collapser(verts, faces, resolution);
  collapser.run();
  SurfaceMesh mesh;
  mesh.vertices = std::move(verts);
  for (std::size_t f = 0; f < faces.size(); ++f)
    if (collapser.alive(f)) mesh.faces.push_back(faces[f]);
  mesh = compact(mesh);
  mesh.normals = vertex_normals(mesh);
  return mesh;
}

}  // namespace

SurfaceMesh marching_cubes(const field::ScalarGrid& grid, double iso) {
  if (grid.dim() != 3) throw InvalidArgument("marching_cubes requires a 3D grid");
  grid.require_finite("grid");
  const int r = grid.resolution();
  if (r < 2 || !(iso >= grid.min_value() && iso <= grid.max_value())) return {};

  const CubeGeometry& g = cube();
  const auto& table = loop_table();
  const std::size_t nodes = grid.size();
  std::vector<int> edge_vertex(3 * nodes, -1);
  std::vector<Vec3> verts;
  std::vector<Triangle> faces;
  const double inv_r = 1.0 / r;

  auto node_pos = [&](int i, int j, int k) { return Vec3{(i + 0.5) * inv_r, (j + 0.5) * inv_r, (k + 0.5) * inv_r}; };
  std::array<double, 8> val;
  std::vector<int> ids, edges;
  for (int i = 0; i + 1 < r; ++i)
    for (int j = 0; j + 1 < r; ++j)
      for (int k = 0; k + 1 < r; ++k) {
        int mask = 0;
        for (int c = 0; c < 8; ++c) {
          val[c] = grid.at(i + (c & 1), j + (c >> 1 & 1), k + (c >> 2 & 1));
          if (val[c] > iso) mask |= 1 << c;
        }
        if (mask == 0 || mask == 255) continue;
        int bits = 0;
        for (int f = 0; f < 6; ++f) {
          const auto& q = g.face_corners[f];
          if (!face_ambiguous(mask, q)) continue;
          if (0.25 * (val[q[0]] + val[q[1]] + val[q[2]] + val[q[3]]) > iso) bits |= 1 << f;
        }
        auto vertex_on_edge = [&](int e) {
          const int c0 = g.edge_corners[e][0], c1 = g.edge_corners[e][1];
          const int i0 = i + (c0 & 1), j0 = j + (c0 >> 1 & 1), k0 = k + (c0 >> 2 & 1);
          const double t = std::clamp((iso - val[c0]) / (val[c1] - val[c0]), kWeld, 1.0 - kWeld);
          const int a = g.edge_axis[e];
          int& slot = edge_vertex[3 * grid.index(i0, j0, k0) + a];
          if (slot < 0) {
            Vec3 p = node_pos(i0, j0, k0);
            p[a] += t * inv_r;
            slot = static_cast<int>(verts.size());
            verts.push_back(p);
          }
          return slot;
        };
        for (const auto& loop : table[mask | bits << 8]) {
          ids.clear();
          edges.clear();
          for (std::int8_t e : loop.edges) {
            const int id = vertex_on_edge(e);
            ids.push_back(id);
            edges.push_back(e);
          }
          const std::size_t first = faces.size();
          if (!triangulate_loop(ids, edges, verts, faces)) {
            // Tunnel-like loops get a vertex inside the cube, on the level set.
            const Vec3 origin = node_pos(i, j, k);
            Vec3 centroid{0.0, 0.0, 0.0};
            for (int id : ids) centroid = centroid + (r / static_cast<double>(ids.size())) * (verts[id] - origin);
            const Vec3 local = interior_point(val, iso, centroid);
            const int apex = static_cast<int>(verts.size());
            verts.push_back(origin + inv_r * local);
            for (std::size_t v = 0; v < ids.size(); ++v) faces.push_back({apex, ids[v], ids[(v + 1) % ids.size()]});
          }
          if (loop.reversed)
            for (std::size_t t = first; t < faces.size(); ++t) std::swap(faces[t][1], faces[t][2]);
        }
      }
  return cleanup(std::move(verts), std::move(faces), r);
}

Contour marching_squares(const field::ScalarGrid& grid, double iso) {
  if (grid.dim() != 2) throw InvalidArgument("marching_squares requires a 2D grid");
  grid.require_finite("grid");
  const int r = grid.resolution();
  Contour contour;
  if (r < 2 || !(iso >= grid.min_value() && iso <= grid.max_value())) return contour;

  const std::size_t nodes = grid.size();
  std::vector<int> edge_vertex(2 * nodes, -1);
  std::vector<Vec2> verts;
  std::vector<std::array<int, 2>> segments;
  const double inv_r = 1.0 / r;

  // Cell corners counter-clockwise; edge k joins corners k and k+1.
  constexpr std::array<std::array<int, 2>, 4> off{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  std::array<double, 4> val;
  for (int i = 0; i + 1 < r; ++i)
    for (int j = 0; j + 1 < r; ++j) {
      int mask = 0;
      for (int c = 0; c < 4; ++c) {
        val[c] = grid.at(i + off[c][0], j + off[c][1]);
        if (val[c] > iso) mask |= 1 << c;
      }
      if (mask == 0 || mask == 15) continue;
      auto vertex_on_edge = [&](int e) {
        const int c0 = e, c1 = (e + 1) % 4;
        const double t = std::clamp((iso - val[c0]) / (val[c1] - val[c0]), kWeld, 1.0 - kWeld);
        const int i0 = i + off[c0][0], j0 = j + off[c0][1];
        // Edges 2 and 3 run against the axis; key them from their lower node.
        const int a = (e == 0 || e == 2) ? 0 : 1;
        const int li = std::min(i0, i + off[c1][0]), lj = std::min(j0, j + off[c1][1]);
        const double tl = (li == i0 && lj == j0) ? t : 1.0 - t;
        int& slot = edge_vertex[2 * grid.index(li, lj) + a];
        if (slot < 0) {
          Vec2 p{(li + 0.5) * inv_r, (lj + 0.5) * inv_r};
          p[a] += tl * inv_r;
          slot = static_cast<int>(verts.size());
          verts.push_back(p);
        }
        return slot;
      };
      // Segment from edge ea to edge eb cutting off corner c, which is inside
      // when `in`; inside stays on the left.
      auto emit = [&](int ea, int eb, bool in) {
        int a = vertex_on_edge(ea), b = vertex_on_edge(eb);
        if (!in) std::swap(a, b);
        if (a != b) segments.push_back({a, b});
      };
      const bool ambiguous = mask == 5 || mask == 10;
      if (ambiguous) {
        const bool connect_inside = 0.25 * (val[0] + val[1] + val[2] + val[3]) > iso;
        for (int c = 0; c < 4; ++c) {
          const bool in = mask >> c & 1;
          if (in != connect_inside) emit(c, (c + 3) % 4, in);
        }
        continue;
      }
      // Walking the cell counter-clockwise, the crossing into the inside run
      // enters the segment's end and the crossing out of it is its start.
      int enter = -1, leave = -1;
      for (int e = 0; e < 4; ++e) {
        const bool a = mask >> e & 1, b = mask >> ((e + 1) % 4) & 1;
        if (!a && b) enter = e;
        if (a && !b) leave = e;
      }
      emit(leave, enter, true);
    }

  std::vector<std::vector<int>> out(verts.size());
  for (std::size_t s = 0; s < segments.size(); ++s) out[segments[s][0]].push_back(static_cast<int>(s));
  std::vector<char> used(segments.size(), 0);
  for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
    if (used[s0]) continue;
    std::vector<int> loop;
    int s = static_cast<int>(s0);
    while (s >= 0 && !used[s]) {
      used[s] = 1;
      loop.push_back(segments[s][0]);
      const int v = segments[s][1];
      s = -1;
      for (int cand : out[v])
        if (!used[cand]) {
          s = cand;
          break;
        }
    }
    std::vector<Vec2> pts;
    for (int v : loop)
      if (pts.empty() || norm(verts[v] - pts.back()) > kWeld) pts.push_back(verts[v]);
    while (pts.size() > 1 && norm(pts.front() - pts.back()) <= kWeld) pts.pop_back();
    if (pts.size() >= 3) contour.loops.push_back(std::move(pts));
  }
  return contour;
}

}  // namespace hybridshape::mesh
