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

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "hybridshape/error.hpp"
#include "hybridshape/field/dpsr.hpp"
#include "hybridshape/field/filters.hpp"
#include "hybridshape/field/grid.hpp"
#include "hybridshape/field/grid_io.hpp"
#include "hybridshape/rng.hpp"

using namespace hybridshape;
using namespace hybridshape::field;

namespace {

OrientedPointCloud random_cloud(int dim, std::size_t k, std::uint64_t seed, bool raw = false) {
  Rng rng(seed);
  std::vector<double> p(k * dim), n(k * dim);
  for (auto& v : p) v = rng.uniform(0.05, 0.95);
  for (auto& v : n) v = rng.uniform(-1.0, 1.0);
  return raw ? OrientedPointCloud::with_raw_normals(dim, p, n) : OrientedPointCloud(dim, p, n);
}

OrientedPointCloud circle_cloud(std::size_t k, double radius) {
  std::vector<double> p, n;
  for (std::size_t i = 0; i < k; ++i) {
    const double t = 2.0 * M_PI * (i + 0.5) / k;
    p.push_back(0.5 + radius * std::cos(t));
    p.push_back(0.5 + radius * std::sin(t));
    n.push_back(std::cos(t));
    n.push_back(std::sin(t));
  }
  return OrientedPointCloud(2, p, n);
}

// Direct O(n^2) DFT of a real 2D/3D grid at integer frequency u (signed).
std::complex<double> naive_dft(std::span<const double> values, int dim, int r, const int* u) {
  std::complex<double> acc = 0.0;
  const std::size_t n = values.size();
  for (std::size_t idx = 0; idx < n; ++idx) {
    int coord[3];
    std::size_t rest = idx;
    for (int a = dim - 1; a >= 0; --a) {
      coord[a] = static_cast<int>(rest % r);
      rest /= r;
    }
    double phase = 0.0;
    for (int a = 0; a < dim; ++a) phase += static_cast<double>(u[a]) * coord[a] / r;
    acc += values[idx] * std::polar(1.0, -2.0 * M_PI * phase);
  }
  return acc;
}

double loss_for(const OrientedPointCloud& cloud, const DpsrParams& params, const ScalarGrid& target) {
  auto res = dpsr_forward(cloud, params);
  return wmse_loss(res.chi, target, ScalarGrid(target.dim(), target.resolution(),
                                                std::vector<double>(target.size(), 1.0)))
      .value;
}

}  // namespace

TEST_CASE("rasterize: point at a cell center lands in that single cell") {
  // Smallest resolution rasterize accepts is 8.
  const int r = 8;
  const double c = (2 + 0.5) / r;
  OrientedPointCloud cloud(3, {c, (5 + 0.5) / r, (1 + 0.5) / r}, {0.0, 0.0, 1.0});
  const VectorGrid q = rasterize(cloud, r);
  const std::size_t cell = (2 * r + 5) * r + 1;
  for (std::size_t i = 0; i < q.cells(); ++i) {
    CHECK(q.component(0)[i] == 0.0);
    CHECK(q.component(1)[i] == 0.0);
    CHECK(q.component(2)[i] == (i == cell ? 1.0 : 0.0));
  }
}

TEST_CASE("rasterize: point on a cell corner splats a quarter into each of four cells") {
  const int r = 16;
  OrientedPointCloud cloud(2, {4.0 / r, 9.0 / r}, {1.0, 0.0});
  const VectorGrid q = rasterize(cloud, r);
  for (int i : {3, 4})
    for (int j : {8, 9}) CHECK(q.component(0)[i * r + j] == doctest::Approx(0.25).epsilon(1e-15));
  double total = 0.0;
  for (double v : q.component(0)) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("rasterize: multilinear weights form a partition of unity") {
  const auto cloud = random_cloud(2, 10, 7);
  const VectorGrid q = rasterize(cloud, 16);
  for (int c = 0; c < 2; ++c) {
    double in = 0.0, out = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) in += cloud.normal(i)[c];
    for (double v : q.component(c)) out += v;
    CHECK(std::abs(in - out) < 1e-12);
  }
}

TEST_CASE("rasterize: rejects empty clouds, small grids and non-finite input") {
  OrientedPointCloud empty(2, {}, {});
  CHECK_THROWS_WITH_AS(rasterize(empty, 16), "empty point set", InvalidArgument);
  CHECK_THROWS_AS(rasterize(random_cloud(2, 3, 1), 4), InvalidArgument);
  CHECK_THROWS_AS(OrientedPointCloud(2, {NAN, 0.5}, {1.0, 0.0}), InvalidArgument);
}

TEST_CASE("point cloud: clamps positions and normalizes normals") {
  OrientedPointCloud cloud(3, {-0.2, 0.5, 1.7}, {3.0, 0.0, 4.0});
  CHECK(cloud.position(0)[0] == 0.0);
  CHECK(cloud.position(0)[2] == 1.0);
  const auto n = cloud.normal(0);
  CHECK(std::abs(std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) - 1.0) < 1e-6);
  CHECK_THROWS_AS(OrientedPointCloud(2, {0.5, 0.5, 0.1}, {1.0, 0.0}), InvalidArgument);
}

TEST_CASE("spectral kernel: unit at zero frequency, radially symmetric, in (0,1]") {
  const SpectralKernel k(2, 32, 2.0);
  const auto g = k.multipliers();
  CHECK(g[0] == 1.0);
  for (double v : g) {
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
  const int half = 32 / 2 + 1;
  // (3, 4) and (5, 0) have the same magnitude; (-3 -> index 29).
  CHECK(g[3 * half + 4] == doctest::Approx(g[5 * half + 0]).epsilon(1e-15));
  CHECK(g[29 * half + 4] == g[3 * half + 4]);
  const SpectralKernel flat(3, 16, 0.0);
  for (double v : flat.multipliers()) CHECK(v == 1.0);
}

TEST_CASE("poisson solve: zero field gives zero indicator") {
  const VectorGrid q(3, 16);
  const ScalarGrid chi = solve_poisson_spectral(q, SpectralKernel(3, 16, 2.0));
  for (double v : chi.values()) CHECK(v == 0.0);
}

TEST_CASE("poisson solve: recovers f from its gradient field") {
  const int r = 64;
  for (int axis = 0; axis < 2; ++axis) {
    VectorGrid q(2, r);
    std::vector<double> f(r * r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        const double x = (axis == 0 ? i : j) + 0.5;
        f[i * r + j] = std::cos(2.0 * M_PI * x / r);
        q.component(axis)[i * r + j] = -2.0 * M_PI * std::sin(2.0 * M_PI * x / r);
      }
    double mean = 0.0;
    for (double v : f) mean += v;
    mean /= f.size();
    const ScalarGrid chi = solve_poisson_spectral(q, SpectralKernel(2, r, 0.0));
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(chi[i] - (f[i] - mean)));
    CHECK(err < 1e-6);
  }
}

TEST_CASE("poisson solve: spectral residual against a direct DFT") {
  for (int dim : {2, 3}) {
    const int r = 8;
    const auto cloud = random_cloud(dim, 12, 11 + dim);
    const VectorGrid q = rasterize(cloud, r);
    const SpectralKernel kernel(dim, r, 1.5);
    const ScalarGrid chi = solve_poisson_spectral(q, kernel);
    double mean = 0.0;
    for (double v : chi.values()) mean += v;
    CHECK(std::abs(mean) < 1e-12);
    int u[3] = {0, 0, 0};
    const int lim = dim == 2 ? 1 : r;
    double worst = 0.0;
    for (u[0] = -r / 2; u[0] < r / 2; ++u[0])
      for (u[1] = -r / 2; u[1] < r / 2; ++u[1])
        for (int w = 0; w < lim; ++w) {
          if (dim == 3) u[2] = w - r / 2;
          const double norm2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
          if (norm2 == 0.0) continue;
          const double g = std::exp(-2.0 * (1.5 / r) * (1.5 / r) * norm2);
          const std::complex<double> lap = -4.0 * M_PI * M_PI * norm2 * naive_dft(chi.values(), dim, r, u);
          std::complex<double> div = 0.0;
          for (int c = 0; c < dim; ++c) {
            const double uc = u[c] == -r / 2 ? 0.0 : u[c];
            div += std::complex<double>(0.0, 2.0 * M_PI * uc) * g * naive_dft(q.component(c), dim, r, u);
          }
          worst = std::max(worst, std::abs(lap - div) / (1.0 + std::abs(div)));
        }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("poisson solve: linear in the normals") {
  const auto cloud = random_cloud(3, 20, 5);
  const SpectralKernel kernel(3, 16, 2.0);
  const ScalarGrid base = solve_poisson_spectral(rasterize(cloud, 16), kernel);
  std::vector<double> n2(cloud.normals().begin(), cloud.normals().end());
  for (double& v : n2) v *= 2.0;
  const auto doubled = OrientedPointCloud::with_raw_normals(
      3, std::vector<double>(cloud.positions().begin(), cloud.positions().end()), n2);
  const ScalarGrid scaled = solve_poisson_spectral(rasterize(doubled, 16), kernel);
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(scaled[i] == 2.0 * base[i]);
  CHECK_THROWS_AS(solve_poisson_spectral(rasterize(cloud, 16), SpectralKernel(3, 32, 2.0)), InvalidArgument);
}

TEST_CASE("poisson solve: adjoint satisfies <L q, c> = <q, L^T c>") {
  for (int dim : {2, 3}) {
    const int r = 16;
    const SpectralKernel kernel(dim, r, 2.0);
    Rng rng(99);
    VectorGrid q(dim, r);
    for (double& v : q.values()) v = rng.uniform(-1.0, 1.0);
    ScalarGrid c(dim, r);
    for (double& v : c.values()) v = rng.uniform(-1.0, 1.0);
    const ScalarGrid lq = solve_poisson_spectral(q, kernel);
    const VectorGrid ltc = solve_poisson_spectral_adjoint(c, kernel);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < lq.size(); ++i) lhs += lq[i] * c[i];
    for (std::size_t i = 0; i < q.values().size(); ++i) rhs += q.values()[i] * ltc.values()[i];
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("normalize: constants annihilate, corner is -m, odd in the normals") {
  const auto cloud = circle_cloud(512, 0.25);
  ScalarGrid constant(2, 32, std::vector<double>(32 * 32, 3.5));
  const ScalarGrid zero = normalize_indicator(constant, cloud, 0.5);
  for (double v : zero.values()) CHECK(v == 0.0);

  const DpsrParams params{128, 2.0, 0.5};
  const auto res = dpsr_forward(cloud, params);
  CHECK(res.chi[0] == -0.5);
  double mean_abs = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) mean_abs += std::abs(interpolate(res.chi, cloud.position(i)));
  CHECK(mean_abs / cloud.size() < 0.02);
  // Center of the disk is inside, hence positive.
  CHECK(res.chi.at(64, 64) > 0.0);

  // Build both clouds from the same raw normals so normalization is symmetric.
  std::vector<double> pos, raw, flipped;
  for (int i = 0; i < 300; ++i) {
    const double t = 2.0 * M_PI * i / 300.0;
    pos.insert(pos.end(), {0.5 + 0.3 * std::cos(t), 0.5 + 0.2 * std::sin(t)});
    raw.insert(raw.end(), {0.2 * std::cos(t), 0.3 * std::sin(t)});
    flipped.insert(flipped.end(), {-0.2 * std::cos(t), -0.3 * std::sin(t)});
  }
  const OrientedPointCloud pos_cloud(2, pos, raw);
  const OrientedPointCloud neg(2, pos, flipped);
  const auto res_pos = dpsr_forward(pos_cloud, params);
  const auto res_neg = dpsr_forward(neg, params);
  for (std::size_t i = 0; i < res.chi.size(); ++i) CHECK(res_neg.chi[i] == -res_pos.chi[i]);
}

TEST_CASE("normalize: degenerate reference is reported") {
  // chi' that is zero at the corner and at the single cloud point but not elsewhere.
  ScalarGrid g(2, 16);
  g[5 * 16 + 5] = 1.0;
  OrientedPointCloud cloud(2, {0.5 / 16, 0.5 / 16}, {1.0, 0.0});
  CHECK_THROWS_WITH(normalize_indicator(g, cloud, 0.5), "degenerate normalization reference");
}

TEST_CASE("edge weights: constant grid has none") {
  ScalarGrid c(3, 12, std::vector<double>(12 * 12 * 12, 0.3));
  const ScalarGrid w = edge_weight_map(c);
  for (double v : w.values()) CHECK(v == 0.0);
}

TEST_CASE("edge weights: step edge peaks on the flanking columns, support 3 cells") {
  const int r = 32;
  ScalarGrid step(2, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) step[i * r + j] = i < r / 2 ? -0.5 : 0.5;
  const ScalarGrid w = edge_weight_map(step);
  const double peak = w.max_value();
  CHECK(peak == doctest::Approx(1.0));
  for (int j = 0; j < r; ++j) {
    CHECK(w.at(r / 2 - 1, j) == doctest::Approx(peak));
    CHECK(w.at(r / 2, j) == doctest::Approx(peak));
    for (int i = 0; i < r; ++i) {
      CHECK(w.at(i, j) >= 0.0);
      if (i < r / 2 - 4 || i > r / 2 + 3) CHECK(w.at(i, j) == 0.0);
      if (i > 0 && i <= r / 2 - 1) CHECK(w.at(i, j) >= w.at(i - 1, j));
    }
  }
  CHECK(w.at(r / 2 - 4, 0) > 0.0);
  const ScalarGrid raw = edge_weight_map(step, false);
  CHECK(raw.max_value() > 1.0);
}

TEST_CASE("wmse: closed forms and finite-difference gradient") {
  const int r = 4;
  ScalarGrid gt(2, r), pred(2, r), ones(2, r, std::vector<double>(r * r, 1.0));
  for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = gt[i] + 0.1;
  CHECK(wmse_loss(gt, gt, ones).value == 0.0);
  CHECK(wmse_loss(pred, gt, ones).value == doctest::Approx(0.16).epsilon(1e-12));

  Rng rng(3);
  ScalarGrid a(2, 8), b(2, 8), w(2, 8);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.uniform(-1, 1);
    b[i] = rng.uniform(-1, 1);
    w[i] = rng.uniform(0, 1);
  }
  const auto res = wmse_loss(a, b, w);
  // The loss is quadratic per cell, so central differences are exact up to
  // rounding; a wide step keeps rounding small.
  const double h = 1e-3;
  double err2 = 0.0, ref2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ScalarGrid ap = a, am = a;
    ap[i] += h;
    am[i] -= h;
    const double fd = (wmse_loss(ap, b, w).value - wmse_loss(am, b, w).value) / (2 * h);
    err2 += (fd - res.gradient[i]) * (fd - res.gradient[i]);
    ref2 += fd * fd;
  }
  CHECK(std::sqrt(err2 / ref2) < 1e-8);
  CHECK_THROWS_AS(wmse_loss(a, ScalarGrid(2, 16), w), InvalidArgument);
}

TEST_CASE("dpsr backward: zero cotangent gives zero gradients, tape is single use") {
  const auto cloud = random_cloud(2, 8, 21);
  auto res = dpsr_forward(cloud, {16, 2.0, 0.5});
  const auto g = dpsr_backward(res.tape, ScalarGrid(2, 16));
  for (double v : g.positions) CHECK(v == 0.0);
  for (double v : g.normals) CHECK(v == 0.0);
  CHECK(res.tape.consumed());
  CHECK_THROWS_AS(dpsr_backward(res.tape, ScalarGrid(2, 16)), InvalidArgument);
}

TEST_CASE("dpsr tape: replay reproduces the recorded output bit for bit") {
  const auto cloud = random_cloud(3, 40, 8);
  const auto res = dpsr_forward(cloud, {16, 2.0, 0.5});
  const ScalarGrid again = res.tape.replay();
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i] == res.chi[i]);
}

TEST_CASE("dpsr backward: single point matches central differences") {
  const DpsrParams params{16, 2.0, 0.5};
  ScalarGrid target(2, 16);
  Rng rng(5);
  for (double& v : target.values()) v = rng.uniform(-0.5, 0.5);
  const std::vector<double> p0 = {0.4123, 0.5871}, n0 = {0.6, -0.8};
  const auto cloud = OrientedPointCloud::with_raw_normals(2, p0, n0);
  auto res = dpsr_forward(cloud, params);
  const ScalarGrid ones(2, 16, std::vector<double>(256, 1.0));
  const auto grads = dpsr_backward(res.tape, wmse_loss(res.chi, target, ones).gradient);
  const double h = 1e-5;
  for (int which = 0; which < 2; ++which)
    for (int a = 0; a < 2; ++a) {
      auto pp = p0, pn = n0;
      auto mp = p0, mn = n0;
      (which == 0 ? pp : pn)[a] += h;
      (which == 0 ? mp : mn)[a] -= h;
      const double fd = (loss_for(OrientedPointCloud::with_raw_normals(2, pp, pn), params, target) -
                         loss_for(OrientedPointCloud::with_raw_normals(2, mp, mn), params, target)) /
                        (2 * h);
      const double an = (which == 0 ? grads.positions : grads.normals)[a];
      CAPTURE(which);
      CAPTURE(a);
      CHECK(std::abs(an - fd) < 1e-5 * std::abs(fd));
    }
}

TEST_CASE("grid io: HGRD round trip and malformed input") {
  const auto path = (std::filesystem::temp_directory_path() / "hybridshape_test.hgrd").string();
  ScalarGrid g(3, 5);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::sin(1.0 + i);
  write_scalar_grid(path, g);
  const ScalarGrid back = read_scalar_grid(path);
  CHECK(back.dim() == 3);
  CHECK(back.resolution() == 5);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == g[i]);
  CHECK(std::filesystem::file_size(path) == 16 + 12 + 125 * 8);
  {
    std::ofstream bad(path, std::ios::binary);
    bad << "NOTAGRID";
  }
  CHECK_THROWS_AS(read_scalar_grid(path), InvalidArgument);
  std::filesystem::remove(path);
}
