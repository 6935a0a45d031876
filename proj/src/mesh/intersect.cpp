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

#include "hybridshape/mesh/intersect.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hybridshape/parallel.hpp"

namespace hybridshape::mesh {

namespace {

int sign_of(const mpq_class& x) { return sgn(x); }

}  // namespace

int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const double bx = b[0] - a[0], by = b[1] - a[1], bz = b[2] - a[2];
  const double cx = c[0] - a[0], cy = c[1] - a[1], cz = c[2] - a[2];
  const double dx = d[0] - a[0], dy = d[1] - a[1], dz = d[2] - a[2];
  const double m1 = cy * dz - cz * dy, m2 = cx * dz - cz * dx, m3 = cx * dy - cy * dx;
  const double det = bx * m1 - by * m2 + bz * m3;
  const double perm = std::abs(bx) * (std::abs(cy * dz) + std::abs(cz * dy)) +
                      std::abs(by) * (std::abs(cx * dz) + std::abs(cz * dx)) +
                      std::abs(bz) * (std::abs(cx * dy) + std::abs(cy * dx));
  const double bound = 1e-15 * perm;
  if (det > bound) return 1;
  if (det < -bound) return -1;
  if (perm == 0.0) return 0;
  std::array<mpq_class, 9> q;
  for (int k = 0; k < 3; ++k) {
    q[k] = mpq_class(b[k]) - mpq_class(a[k]);
    q[3 + k] = mpq_class(c[k]) - mpq_class(a[k]);
    q[6 + k] = mpq_class(d[k]) - mpq_class(a[k]);
  }
  const mpq_class e = q[0] * (q[4] * q[8] - q[5] * q[7]) - q[1] * (q[3] * q[8] - q[5] * q[6]) +
                      q[2] * (q[3] * q[7] - q[4] * q[6]);
  return sign_of(e);
}

int orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double l = (b[0] - a[0]) * (c[1] - a[1]);
  const double r = (b[1] - a[1]) * (c[0] - a[0]);
  const double det = l - r;
  const double bound = 5e-16 * (std::abs(l) + std::abs(r));
  if (det > bound) return 1;
  if (det < -bound) return -1;
  if (l == 0.0 && r == 0.0) return 0;
  const mpq_class e = (mpq_class(b[0]) - a[0]) * (mpq_class(c[1]) - a[1]) -
                      (mpq_class(b[1]) - a[1]) * (mpq_class(c[0]) - a[0]);
  return sign_of(e);
}

namespace {

Vec2 drop(const Vec3& p, int axis) {
  return axis == 0 ? Vec2{p[1], p[2]} : axis == 1 ? Vec2{p[0], p[2]} : Vec2{p[0], p[1]};
}

int dominant_axis(const Tri3& t) {
  const Vec3 n = cross(t[1] - t[0], t[2] - t[0]);
  int axis = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(n[k]) > std::abs(n[axis])) axis = k;
  return axis;
}

bool on_segment_2d(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= p[1] &&
         p[1] <= std::max(a[1], b[1]);
}

bool segments_intersect_2d(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d), o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment_2d(a, b, c)) return true;
  if (o2 == 0 && on_segment_2d(a, b, d)) return true;
  if (o3 == 0 && on_segment_2d(c, d, a)) return true;
  if (o4 == 0 && on_segment_2d(c, d, b)) return true;
  return false;
}

bool point_in_triangle_2d(const Vec2& p, const std::array<Vec2, 3>& t) {
  const int s0 = orient2d(t[0], t[1], p), s1 = orient2d(t[1], t[2], p), s2 = orient2d(t[2], t[0], p);
  const bool has_neg = s0 < 0 || s1 < 0 || s2 < 0, has_pos = s0 > 0 || s1 > 0 || s2 > 0;
  return !(has_neg && has_pos);
}

bool segment_triangle_2d(const Vec2& a, const Vec2& b, const std::array<Vec2, 3>& t) {
  if (point_in_triangle_2d(a, t) || point_in_triangle_2d(b, t)) return true;
  for (int k = 0; k < 3; ++k)
    if (segments_intersect_2d(a, b, t[k], t[(k + 1) % 3])) return true;
  return false;
}

std::array<Vec2, 3> project(const Tri3& t, int axis) { return {drop(t[0], axis), drop(t[1], axis), drop(t[2], axis)}; }

bool degenerate(const Tri3& t) {
  for (int axis = 0; axis < 3; ++axis) {
    const auto p = project(t, axis);
    if (orient2d(p[0], p[1], p[2]) != 0) return false;
  }
  return true;
}

bool segment_triangle(const Vec3& a, const Vec3& b, const Tri3& t) {
  const int oa = orient3d(t[0], t[1], t[2], a), ob = orient3d(t[0], t[1], t[2], b);
  if (oa * ob > 0) return false;
  if (oa == 0 && ob == 0) {
    const int axis = dominant_axis(t);
    return segment_triangle_2d(drop(a, axis), drop(b, axis), project(t, axis));
  }
  const int s0 = orient3d(a, b, t[0], t[1]), s1 = orient3d(a, b, t[1], t[2]), s2 = orient3d(a, b, t[2], t[0]);
  const bool has_neg = s0 < 0 || s1 < 0 || s2 < 0, has_pos = s0 > 0 || s1 > 0 || s2 > 0;
  return !(has_neg && has_pos);
}

bool segments_intersect_3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  if (orient3d(a, b, c, d) != 0) return false;
  for (int axis = 0; axis < 3; ++axis)
    if (!segments_intersect_2d(drop(a, axis), drop(b, axis), drop(c, axis), drop(d, axis))) return false;
  return true;
}

// Both inputs collapse to segments or points.
bool degenerate_pair(const Tri3& t1, const Tri3& t2) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (segments_intersect_3d(t1[i], t1[(i + 1) % 3], t2[j], t2[(j + 1) % 3])) return true;
  return false;
}

}  // namespace

bool triangles_intersect(const Tri3& t1, const Tri3& t2) {
  const bool d1 = degenerate(t1), d2 = degenerate(t2);
  if (d1 && d2) return degenerate_pair(t1, t2);
  if (d1 || d2) {
    const Tri3& seg = d1 ? t1 : t2;
    const Tri3& tri = d1 ? t2 : t1;
    for (int k = 0; k < 3; ++k)
      if (segment_triangle(seg[k], seg[(k + 1) % 3], tri)) return true;
    return false;
  }
  const int o0 = orient3d(t2[0], t2[1], t2[2], t1[0]);
  const int o1 = orient3d(t2[0], t2[1], t2[2], t1[1]);
  const int o2 = orient3d(t2[0], t2[1], t2[2], t1[2]);
  if ((o0 > 0 && o1 > 0 && o2 > 0) || (o0 < 0 && o1 < 0 && o2 < 0)) return false;
  if (o0 == 0 && o1 == 0 && o2 == 0) {
    const int axis = dominant_axis(t2);
    const auto p1 = project(t1, axis), p2 = project(t2, axis);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (segments_intersect_2d(p1[i], p1[(i + 1) % 3], p2[j], p2[(j + 1) % 3])) return true;
    return point_in_triangle_2d(p1[0], p2) || point_in_triangle_2d(p2[0], p1);
  }
  const int q0 = orient3d(t1[0], t1[1], t1[2], t2[0]);
  const int q1 = orient3d(t1[0], t1[1], t1[2], t2[1]);
  const int q2 = orient3d(t1[0], t1[1], t1[2], t2[2]);
  if ((q0 > 0 && q1 > 0 && q2 > 0) || (q0 < 0 && q1 < 0 && q2 < 0)) return false;
  for (int k = 0; k < 3; ++k) {
    if (segment_triangle(t1[k], t1[(k + 1) % 3], t2)) return true;
    if (segment_triangle(t2[k], t2[(k + 1) % 3], t1)) return true;
  }
  return false;
}

namespace {

struct Box {
  Vec3 lo, hi;
  bool overlaps(const Box& o) const {
    for (int k = 0; k < 3; ++k)
      if (hi[k] < o.lo[k] || o.hi[k] < lo[k]) return false;
    return true;
  }
  void grow(const Box& o) {
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], o.lo[k]);
      hi[k] = std::max(hi[k], o.hi[k]);
    }
  }
};

struct Bvh {
  struct Node {
    Box box;
    int left = -1, right = -1;
    int begin = 0, end = 0;
  };
  std::vector<Node> nodes;
  std::vector<int> order;

  Bvh(const std::vector<Box>& boxes) : order(boxes.size()) {
    std::iota(order.begin(), order.end(), 0);
    if (!boxes.empty()) build(boxes, 0, static_cast<int>(boxes.size()));
  }

  int build(const std::vector<Box>& boxes, int begin, int end) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back({});
    Box box = boxes[order[begin]];
    for (int i = begin + 1; i < end; ++i) box.grow(boxes[order[i]]);
    nodes[id].box = box;
    if (end - begin <= 4) {
      nodes[id].begin = begin;
      nodes[id].end = end;
      return id;
    }
    int axis = 0;
    for (int k = 1; k < 3; ++k)
      if (box.hi[k] - box.lo[k] > box.hi[axis] - box.lo[axis]) axis = k;
    const int mid = (begin + end) / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end, [&](int a, int b) {
      const double ca = boxes[a].lo[axis] + boxes[a].hi[axis], cb = boxes[b].lo[axis] + boxes[b].hi[axis];
      return ca < cb || (ca == cb && a < b);
    });
    const int l = build(boxes, begin, mid);
    const int r = build(boxes, mid, end);
    nodes[id].left = l;
    nodes[id].right = r;
    return id;
  }

  template <class Visit>
  bool any(const Box& query, Visit&& visit) const {
    if (nodes.empty()) return false;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const Node& n = nodes[stack.back()];
      stack.pop_back();
      if (!n.box.overlaps(query)) continue;
      if (n.left < 0) {
        for (int i = n.begin; i < n.end; ++i)
          if (visit(order[i])) return true;
        continue;
      }
      stack.push_back(n.left);
      stack.push_back(n.right);
    }
    return false;
  }
};

}  // namespace

std::vector<char> self_intersecting_faces(const SurfaceMesh& mesh) {
  mesh.validate();
  const std::size_t n = mesh.faces.size();
  std::vector<Box> boxes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = mesh.faces[i];
    Box b{mesh.vertices[f[0]], mesh.vertices[f[0]]};
    for (int k = 1; k < 3; ++k) b.grow({mesh.vertices[f[k]], mesh.vertices[f[k]]});
    boxes[i] = b;
  }
  const Bvh bvh(boxes);
  auto tri = [&](std::size_t i) {
    const auto& f = mesh.faces[i];
    return Tri3{mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]};
  };
  std::vector<char> hit(n, 0);
  parallel_for(
      n,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const auto& fi = mesh.faces[i];
          const Tri3 ti = tri(i);
          hit[i] = bvh.any(boxes[i], [&](int j) {
            if (static_cast<std::size_t>(j) == i) return false;
            const auto& fj = mesh.faces[j];
            for (int a : fi)
              for (int b : fj)
                if (a == b) return false;
            return triangles_intersect(ti, tri(j));
          });
        }
      },
      64);
  return hit;
}

double self_intersection_ratio(const SurfaceMesh& mesh) {
  if (mesh.faces.empty()) return 0.0;
  const auto hit = self_intersecting_faces(mesh);
  return static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / static_cast<double>(hit.size());
}

}  // namespace hybridshape::mesh
