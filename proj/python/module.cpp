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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>
#include <vector>

#include "hybridshape/error.hpp"
#include "hybridshape/field/dpsr.hpp"
#include "hybridshape/hybrid/fixtures.hpp"
#include "hybridshape/hybrid/optimize.hpp"
#include "hybridshape/mesh/intersect.hpp"
#include "hybridshape/mesh/marching.hpp"
#include "hybridshape/metrics/metrics.hpp"
#include "hybridshape/topo/topology.hpp"
#include "hybridshape/version.hpp"

namespace py = pybind11;
using namespace hybridshape;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IndexArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

std::vector<double> flat(const Array& a, int cols, const char* what) {
  if (a.ndim() != 2 || a.shape(1) != cols)
    throw InvalidArgument(std::string(what) + " must have shape (n, " + std::to_string(cols) + ")");
  return {a.data(), a.data() + a.size()};
}

int cloud_dim(const Array& points) {
  if (points.ndim() != 2 || (points.shape(1) != 2 && points.shape(1) != 3))
    throw InvalidArgument("points must have shape (n, 2) or (n, 3)");
  return static_cast<int>(points.shape(1));
}

field::OrientedPointCloud to_cloud(const Array& points, const Array& normals) {
  const int d = cloud_dim(points);
  return field::OrientedPointCloud(d, flat(points, d, "points"), flat(normals, d, "normals"));
}

Array to_array(const std::vector<double>& v, std::vector<py::ssize_t> shape) {
  Array out(shape);
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Array grid_to_array(const field::ScalarGrid& g) {
  std::vector<py::ssize_t> shape(g.dim(), g.resolution());
  return to_array({g.values().begin(), g.values().end()}, shape);
}

field::ScalarGrid array_to_grid(const Array& a) {
  if (a.ndim() != 2 && a.ndim() != 3) throw InvalidArgument("grid must be 2D or 3D");
  for (int i = 1; i < a.ndim(); ++i)
    if (a.shape(i) != a.shape(0)) throw InvalidArgument("grid must be square/cubic");
  return field::ScalarGrid(static_cast<int>(a.ndim()), static_cast<int>(a.shape(0)),
                           std::vector<double>(a.data(), a.data() + a.size()));
}

mesh::SurfaceMesh to_mesh(const Array& vertices, const IndexArray& faces) {
  const auto v = flat(vertices, 3, "vertices");
  if (faces.ndim() != 2 || faces.shape(1) != 3) throw InvalidArgument("faces must have shape (m, 3)");
  mesh::SurfaceMesh m;
  for (std::size_t i = 0; i < v.size(); i += 3) m.vertices.push_back({v[i], v[i + 1], v[i + 2]});
  const int* f = faces.data();
  for (py::ssize_t i = 0; i < faces.shape(0); ++i) m.faces.push_back({f[3 * i], f[3 * i + 1], f[3 * i + 2]});
  m.validate();
  return m;
}

py::tuple from_mesh(const mesh::SurfaceMesh& m) {
  Array v({static_cast<py::ssize_t>(m.vertices.size()), py::ssize_t{3}});
  IndexArray f({static_cast<py::ssize_t>(m.faces.size()), py::ssize_t{3}});
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    std::copy(m.vertices[i].begin(), m.vertices[i].end(), v.mutable_data() + 3 * i);
  for (std::size_t i = 0; i < m.faces.size(); ++i)
    std::copy(m.faces[i].begin(), m.faces[i].end(), f.mutable_data() + 3 * i);
  return py::make_tuple(v, f);
}

py::list from_contour(const mesh::Contour& c) {
  py::list loops;
  for (const auto& loop : c.loops) {
    Array a({static_cast<py::ssize_t>(loop.size()), py::ssize_t{2}});
    for (std::size_t i = 0; i < loop.size(); ++i) std::copy(loop[i].begin(), loop[i].end(), a.mutable_data() + 2 * i);
    loops.append(a);
  }
  return loops;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hybrid oriented-point / indicator-grid shape tools";
  m.attr("__version__") = kVersion;

  // later registrations are tried first, so the base goes first
  auto& base = py::register_exception<Error>(m, "HybridShapeError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<TopologyError>(m, "TopologyError", base.ptr());

  m.def(
      "dpsr",
      [](const Array& points, const Array& normals, int resolution, double sigma, double m) {
        const auto cloud = to_cloud(points, normals);
        py::gil_scoped_release release;
        auto chi = field::dpsr_forward(cloud, {resolution, sigma, m}).chi;
        py::gil_scoped_acquire acquire;
        return grid_to_array(chi);
      },
      py::arg("points"), py::arg("normals"), py::arg("resolution"), py::arg("sigma") = 2.0, py::arg("m") = 0.5,
      "Indicator grid of an oriented point cloud in [0, 1]^d.");

  m.def(
      "dpsr_loss_gradients",
      [](const Array& points, const Array& normals, const Array& target, double sigma, double m, bool edge_weighting) {
        const auto cloud = to_cloud(points, normals);
        const auto gt = array_to_grid(target);
        auto fwd = field::dpsr_forward(cloud, {gt.resolution(), sigma, m});
        const auto loss = edge_weighting ? field::wmse_loss(fwd.chi, gt, field::edge_weight_map(gt))
                                         : field::mse_loss(fwd.chi, gt);
        const auto g = field::dpsr_backward(fwd.tape, loss.gradient);
        const auto n = static_cast<py::ssize_t>(cloud.size()), d = static_cast<py::ssize_t>(cloud.dim());
        return py::make_tuple(loss.value, to_array(g.positions, {n, d}), to_array(g.normals, {n, d}));
      },
      py::arg("points"), py::arg("normals"), py::arg("target"), py::arg("sigma") = 2.0, py::arg("m") = 0.5,
      py::arg("edge_weighting") = true, "(loss, d loss / d points, d loss / d normals) against a target grid.");

  m.def(
      "marching_cubes", [](const Array& grid, double iso) { return from_mesh(mesh::marching_cubes(array_to_grid(grid), iso)); },
      py::arg("grid"), py::arg("iso") = 0.0, "(vertices, faces) of the level set; inside is value > iso.");
  m.def(
      "marching_squares", [](const Array& grid, double iso) { return from_contour(mesh::marching_squares(array_to_grid(grid), iso)); },
      py::arg("grid"), py::arg("iso") = 0.0, "List of closed (k, 2) loops.");

  m.def(
      "euler_characteristic",
      [](const Array& v, const IndexArray& f) { return mesh::euler_characteristic(to_mesh(v, f)); }, py::arg("vertices"),
      py::arg("faces"));
  m.def(
      "self_intersection_ratio",
      [](const Array& v, const IndexArray& f) { return mesh::self_intersection_ratio(to_mesh(v, f)); },
      py::arg("vertices"), py::arg("faces"));

  m.def(
      "evaluate",
      [](const Array& pv, const IndexArray& pf, const Array& gv, const IndexArray& gf, std::size_t samples,
         std::uint64_t seed) {
        const auto r = metrics::evaluate(to_mesh(pv, pf), to_mesh(gv, gf), samples, seed);
        py::dict d;
        d["assd"] = r.assd;
        d["hd90"] = r.hd90;
        d["nc"] = r.nc;
        d["si"] = r.si;
        return d;
      },
      py::arg("pred_vertices"), py::arg("pred_faces"), py::arg("gt_vertices"), py::arg("gt_faces"),
      py::arg("samples") = 100000, py::arg("seed") = 0, "ASSD, HD90, NC and SI of pred against gt.");

  m.def(
      "optimize_oriented_points",
      [](const Array& target, const Array& points, const Array& normals, double lr, int iterations, double sigma,
         double m, bool edge_weighting) {
        hybrid::HybridConfig cfg;
        const auto gt = array_to_grid(target);
        const auto init = to_cloud(points, normals);
        cfg.resolution = gt.resolution();
        cfg.lr = lr;
        cfg.iterations = iterations;
        cfg.sigma = sigma;
        cfg.m = m;
        cfg.edge_weighting = edge_weighting;
        hybrid::HybridResult r;
        {
          py::gil_scoped_release release;
          r = hybrid::optimize_oriented_points(gt, init, cfg);
        }
        const auto n = static_cast<py::ssize_t>(r.cloud.size()), d = static_cast<py::ssize_t>(r.cloud.dim());
        py::dict out;
        out["points"] = to_array({r.cloud.positions().begin(), r.cloud.positions().end()}, {n, d});
        out["normals"] = to_array({r.cloud.normals().begin(), r.cloud.normals().end()}, {n, d});
        out["chi"] = grid_to_array(r.chi);
        out["losses"] = r.losses;
        out["smoothed"] = r.smoothed;
        out["final_loss"] = r.final_loss;
        return out;
      },
      py::arg("target"), py::arg("points"), py::arg("normals"), py::arg("lr") = 3e-3, py::arg("iterations") = 1000,
      py::arg("sigma") = 2.0, py::arg("m") = 0.5, py::arg("edge_weighting") = true);

  m.def(
      "correct_topology",
      [](const Array& chi, const Array& v, const IndexArray& f, double tau, int reg_iters, double reg_lr,
         std::size_t reg_samples, std::uint64_t seed) {
        topo::TopoConfig cfg;
        cfg.tau = tau;
        cfg.registration.iterations = reg_iters;
        cfg.registration.lr = reg_lr;
        cfg.registration.samples = reg_samples;
        cfg.registration.seed = seed;
        const auto grid = array_to_grid(chi);
        const auto defective = to_mesh(v, f);
        topo::TopoResult r;
        {
          py::gil_scoped_release release;
          r = topo::correct_topology(grid, cfg, defective);
        }
        py::dict out;
        const auto vf = from_mesh(r.mesh);
        out["vertices"] = vf[0];
        out["faces"] = vf[1];
        out["tau"] = r.tau;
        out["attempts"] = r.attempts;
        out["euler_before"] = r.euler_before;
        out["euler_after"] = r.euler_after;
        out["final_chamfer"] = r.final_chamfer;
        return out;
      },
      py::arg("chi"), py::arg("vertices"), py::arg("faces"), py::arg("tau") = 0.5, py::arg("reg_iters") = 75,
      py::arg("reg_lr") = 3e-4, py::arg("reg_samples") = 20000, py::arg("seed") = 0,
      "Genus-0 surface from an indicator grid, registered back onto the given mesh.");

  m.def(
      "make_polygon_target", [](int pivots, std::uint64_t seed) { return from_contour(fixtures::make_polygon_target(pivots, seed)); },
      py::arg("pivots") = 40, py::arg("seed") = 0);
  m.def(
      "make_circle",
      [](int n, double radius, std::array<double, 2> center) { return from_contour(fixtures::make_circle(n, radius, center)); },
      py::arg("n") = 200, py::arg("radius") = 0.25, py::arg("center") = std::array<double, 2>{0.5, 0.5});
}
