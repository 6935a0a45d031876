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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "hybridshape/error.hpp"
#include "hybridshape/flow/field.hpp"
#include "hybridshape/flow/integrate.hpp"
#include "hybridshape/flow/registration.hpp"
#include "hybridshape/flow/shape.hpp"
#include "hybridshape/hybrid/fixtures.hpp"
#include "hybridshape/metrics/metrics.hpp"
#include "hybridshape/rng.hpp"

using namespace hybridshape;
using namespace hybridshape::flow;

namespace {

// v(p) = theta * e1
class AxisField final : public Field {
 public:
  int dim() const override { return 2; }
  std::span<const double> parameters() const override { return theta_; }
  std::span<double> parameters() override { return theta_; }
  void evaluate(std::span<const double> p, std::span<double> v) const override {
    for (std::size_t i = 0; i < p.size(); i += 2) {
      v[i] = theta_[0];
      v[i + 1] = 0.0;
    }
  }
  void evaluate_vjp(std::span<const double> p, std::span<const double> c, std::span<double> v,
                    std::span<double> pg, std::span<double> g) const override {
    if (!v.empty()) evaluate(p, v);
    std::fill(pg.begin(), pg.end(), 0.0);
    for (std::size_t i = 0; i < p.size(); i += 2) g[0] += c[i];
  }

 private:
  std::vector<double> theta_{0.7};
};

LinearField rotation_field() { return LinearField(2, {0.0, -1.0, 1.0, 0.0}, {0.0, 0.0}); }

std::vector<double> random_points(std::size_t n, int dim, std::uint64_t seed, double lo = 0.2, double hi = 0.8) {
  Rng rng(seed);
  std::vector<double> p(n * dim);
  for (auto& x : p) x = rng.uniform(lo, hi);
  return p;
}

FieldConfig small_config(int dim, std::uint64_t seed) {
  FieldConfig c;
  c.dim = dim;
  c.embedding = 16;
  c.hidden = 16;
  c.depth = 1;
  c.seed = seed;
  return c;
}

// Gives the zero-initialized head some weight so every layer matters.
void perturb_head(VelocityField& f, double amp, std::uint64_t seed) {
  Rng rng(seed);
  const auto params = f.parameters();
  const std::size_t head = static_cast<std::size_t>(f.config().hidden + 1) * f.dim();
  for (std::size_t i = params.size() - head; i < params.size(); ++i) params[i] = rng.uniform(-amp, amp);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double rotation_error(double h) {
  const LinearField f = rotation_field();
  const std::vector<double> p{0.3, 0.1};
  const auto tr = integrate(f, p, 0.0, 1.0, h);
  const double c = std::cos(1.0), s = std::sin(1.0);
  return std::hypot(tr.final[0] - (c * p[0] - s * p[1]), tr.final[1] - (s * p[0] + c * p[1]));
}

}  // namespace

TEST_CASE("step counts and truncated final step") {
  CHECK(step_count(0, 1, 0.2) == 5);
  CHECK(step_count(0, 1, 0.3) == 4);
  CHECK(step_count(1, 0, 0.25) == 4);
  CHECK(step_count(0, 0, 0.2) == 0);
  CHECK_THROWS_AS(step_count(0, 1, 0.0), InvalidArgument);
  const LinearField zero(2);
  const std::vector<double> p{0.1, 0.2};
  const auto tr = integrate(zero, p, 0.0, 1.0, 0.3);
  REQUIRE(tr.steps.size() == 4);
  CHECK(tr.steps.back() == doctest::Approx(0.1).epsilon(1e-12));
  const auto back = integrate(zero, p, 1.0, 0.0, 0.3);
  CHECK(back.steps.front() == -0.3);
}

TEST_CASE("trivial fields") {
  const std::vector<double> p = random_points(10, 3, 1);
  CHECK(integrate(LinearField(3), p).final == p);

  const LinearField constant(3, std::vector<double>(9, 0.0), {0.1, -0.2, 0.05});
  const auto tr = integrate(constant, p);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(tr.final[i] - (p[i] + constant.parameters()[9 + i % 3])) < 1e-15);
  const auto back = integrate(constant, tr.final, 1.0, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(back.final[i] - p[i]) < 1e-15);
}

TEST_CASE("rotation flow matches the matrix exponential with fourth-order convergence") {
  CHECK(rotation_error(0.2) < 1e-5);
  const double e1 = rotation_error(0.2), e2 = rotation_error(0.1), e3 = rotation_error(0.05);
  const double slope = (std::log(e1) - std::log(e3)) / (std::log(0.2) - std::log(0.05));
  CHECK(slope == doctest::Approx(4.0).epsilon(0.075));
  CHECK(e2 < e1);
  CHECK(e3 < e2);
}

TEST_CASE("non-finite velocity raises") {
  const LinearField bad(2, {0, 0, 0, 0}, {NAN, 0.0});
  const std::vector<double> p{0.5, 0.5};
  CHECK_THROWS_WITH_AS(integrate(bad, p), "velocity blow-up", NumericalError);
}

TEST_CASE("invertibility") {
  const std::vector<double> p = random_points(20, 2, 4);
  CHECK(invertibility_check(LinearField(2), p) == 0.0);
  // |p| <= 0.2 keeps the RK4 round trip below 1e-6
  const auto near = random_points(20, 2, 5, -0.14, 0.14);
  CHECK(invertibility_check(rotation_field(), near) < 1e-6);
  // RK4 on a rotation shrinks radii by |R(ih)| per step, R(z) = 1 + z + z^2/2 + z^3/6 + z^4/24;
  // going back applies the conjugate, so the round trip scales by |R(ih)|^10
  const double h = 0.2;
  const double re = 1 - h * h / 2 + std::pow(h, 4) / 24, im = h - std::pow(h, 3) / 6;
  const double shrink = 1.0 - std::pow(re * re + im * im, 5);
  double rmax = 0.0;
  for (std::size_t i = 0; i < p.size(); i += 2) rmax = std::max(rmax, std::hypot(p[i], p[i + 1]));
  CHECK(invertibility_check(rotation_field(), p) == doctest::Approx(shrink * rmax).epsilon(1e-6));
  VelocityField f(small_config(2, 3));
  perturb_head(f, 0.01, 5);
  const double e1 = invertibility_check(f, p, 0.2), e2 = invertibility_check(f, p, 0.05);
  CHECK(e2 <= e1);
  CHECK(e2 < 1e-6);
}

TEST_CASE("velocity field shape and identity start") {
  const VelocityField f(FieldConfig{});
  const std::size_t expected = (256 * 128 + 256) + 2 * (256 * 256 + 256) + (3 * 256 + 3);
  CHECK(f.parameter_count() == expected);
  CHECK(f.frequencies().size() == 64 * 3);
  const auto p = random_points(300, 3, 2);
  std::vector<double> v(p.size(), 1.0);
  f.evaluate(p, v);
  CHECK(std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }));
  CHECK(integrate(f, p).final == p);

  double mean = 0.0, var = 0.0;
  for (double b : f.frequencies()) mean += b / 192.0;
  for (double b : f.frequencies()) var += (b - mean) * (b - mean) / 191.0;
  CHECK(std::sqrt(var) == doctest::Approx(5.0).epsilon(0.25));

  const std::size_t first = 256 * 128;
  const auto params = f.parameters();
  CHECK(std::all_of(params.begin(), params.begin() + first, [](double w) { return std::abs(w) <= 1.0 / 128; }));
  const double bound = std::sqrt(6.0 / 256) / 30.0;
  const std::size_t hidden = first + 256;
  CHECK(std::all_of(params.begin() + hidden, params.begin() + hidden + 256 * 256,
                    [&](double w) { return std::abs(w) <= bound; }));

  CHECK_THROWS_AS(VelocityField(FieldConfig{3, 5.0, 127}), InvalidArgument);
}

TEST_CASE("velocity field is deterministic and serializable") {
  VelocityField a(small_config(3, 9)), b(small_config(3, 9)), c(small_config(3, 10));
  CHECK(std::equal(a.parameters().begin(), a.parameters().end(), b.parameters().begin()));
  CHECK(!std::equal(a.parameters().begin(), a.parameters().end(), c.parameters().begin()));
  perturb_head(a, 0.1, 3);

  const auto path = (std::filesystem::temp_directory_path() / "hs_field_test.bin").string();
  a.save(path);
  const VelocityField r = VelocityField::load(path);
  CHECK(r.config().hidden == 16);
  CHECK(r.config().seed == 9);
  CHECK(std::equal(a.parameters().begin(), a.parameters().end(), r.parameters().begin()));
  const auto p = random_points(50, 3, 6);
  std::vector<double> va(p.size()), vr(p.size());
  a.evaluate(p, va);
  r.evaluate(p, vr);
  CHECK(va == vr);
  {
    std::ofstream bad(path, std::ios::binary);
    bad << "nope";
  }
  CHECK_THROWS_AS(VelocityField::load(path), InvalidArgument);
  std::filesystem::remove(path);
}

TEST_CASE("network vector-Jacobian products match finite differences") {
  VelocityField f(small_config(3, 21));
  perturb_head(f, 0.2, 22);
  const auto p = random_points(5, 3, 23);
  Rng rng(24);
  std::vector<double> c(p.size());
  for (auto& x : c) x = rng.uniform(-1, 1);
  std::vector<double> pg(p.size()), g(f.parameter_count(), 0.0), vel(p.size()), v2(p.size());
  f.evaluate_vjp(p, c, vel, pg, g);
  f.evaluate(p, v2);
  CHECK(vel == v2);

  const auto objective = [&](const VelocityField& field, const std::vector<double>& pts) {
    std::vector<double> v(pts.size());
    field.evaluate(pts, v);
    return dot(v, c);
  };
  const double eps = 1e-6;
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto hi = p, lo = p;
    hi[i] += eps;
    lo[i] -= eps;
    const double fd = (objective(f, hi) - objective(f, lo)) / (2 * eps);
    CHECK(fd == doctest::Approx(pg[i]).epsilon(1e-6).scale(1.0));
  }
  double gmax = 0.0;
  for (double x : g) gmax = std::max(gmax, std::abs(x));
  for (std::size_t i = 0; i < g.size(); i += 7) {
    VelocityField hi = f, lo = f;
    hi.parameters()[i] += eps;
    lo.parameters()[i] -= eps;
    const double fd = (objective(hi, p) - objective(lo, p)) / (2 * eps);
    CHECK(std::abs(fd - g[i]) <= 1e-6 * std::max(std::abs(g[i]), gmax));
  }
}

TEST_CASE("flow gradients: trivial cases") {
  AxisField f;
  const std::vector<double> p{0.1, 0.2, 0.4, 0.3};
  const auto tr = integrate(f, p, 0.0, 1.0, 0.2, true);
  // loss = x coordinate of the first point after the flow
  const std::vector<double> c{1.0, 0.0, 0.0, 0.0};
  CHECK(integrate_grad(f, tr, c).parameters[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(integrate_grad(f, tr, c, GradientMode::adjoint).parameters[0] == doctest::Approx(1.0).epsilon(1e-14));

  VelocityField net(small_config(2, 1));
  perturb_head(net, 0.1, 2);
  const auto tn = integrate(net, p, 0.0, 1.0, 0.2, true);
  const auto zero = integrate_grad(net, tn, std::vector<double>(4, 0.0));
  CHECK(std::all_of(zero.parameters.begin(), zero.parameters.end(), [](double x) { return x == 0.0; }));

  const auto plain = integrate(net, p);
  CHECK(plain.final == tn.final);
  CHECK_THROWS_AS(integrate_grad(net, plain, c), InvalidArgument);
  CHECK_NOTHROW(integrate_grad(net, plain, c, GradientMode::adjoint));
}

TEST_CASE("discrete flow gradients match finite differences") {
  VelocityField f(small_config(3, 31));
  perturb_head(f, 0.002, 32);
  const auto p = random_points(8, 3, 33);
  Rng rng(34);
  std::vector<double> c(p.size());
  for (auto& x : c) x = rng.uniform(-1, 1);
  const auto loss = [&](const VelocityField& field, const std::vector<double>& pts) {
    return dot(integrate(field, pts).final, c);
  };
  const auto tr = integrate(f, p, 0.0, 1.0, 0.2, true);
  const FlowGradients g = integrate_grad(f, tr, c);

  const double eps = 1e-6;
  double gmax = 0.0;
  for (double x : g.parameters) gmax = std::max(gmax, std::abs(x));
  REQUIRE(gmax > 0.0);
  int checked = 0;
  for (std::size_t i = 0; i < g.parameters.size(); i += 3) {
    VelocityField hi = f, lo = f;
    hi.parameters()[i] += eps;
    lo.parameters()[i] -= eps;
    const double fd = (loss(hi, p) - loss(lo, p)) / (2 * eps);
    const double rel = std::abs(fd - g.parameters[i]) / std::max(std::abs(g.parameters[i]), 1e-2 * gmax);
    CHECK(rel < 1e-4);
    ++checked;
  }
  CHECK(checked > 100);
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto hi = p, lo = p;
    hi[i] += eps;
    lo[i] -= eps;
    const double fd = (loss(f, hi) - loss(f, lo)) / (2 * eps);
    CHECK(fd == doctest::Approx(g.points[i]).epsilon(1e-4));
  }
}

TEST_CASE("adjoint and discrete gradients agree") {
  FieldConfig cfg;
  cfg.seed = 41;
  VelocityField f(cfg);
  perturb_head(f, 0.002, 42);
  const auto p = random_points(16, 3, 43);
  Rng rng(44);
  std::vector<double> c(p.size());
  for (auto& x : c) x = rng.uniform(-1, 1);
  const auto tr = integrate(f, p, 0.0, 1.0, 0.2, true);
  const auto a = integrate_grad(f, tr, c, GradientMode::discrete);
  const auto b = integrate_grad(f, tr, c, GradientMode::adjoint);
  std::vector<double> diff(a.parameters.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.parameters[i] - b.parameters[i];
  CHECK(std::sqrt(dot(diff, diff) / dot(a.parameters, a.parameters)) < 1e-3);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(b.points[i] == doctest::Approx(a.points[i]).epsilon(1e-3));
}

TEST_CASE("adam") {
  std::vector<double> x{1.0, -2.0};
  AdamState st;
  adam_step(x, std::vector<double>{0.0, 0.0}, st, 0.1);
  CHECK(x == std::vector<double>{1.0, -2.0});

  std::vector<double> y{0.0};
  AdamState s1;
  adam_step(y, std::vector<double>{1.0}, s1, 0.1);
  CHECK(y[0] == doctest::Approx(-0.1 / (1.0 + 1e-8)).epsilon(1e-15));

  std::vector<double> z{1.0};
  AdamState s2;
  for (int i = 0; i < 200; ++i) adam_step(z, std::vector<double>{2.0 * z[0]}, s2, 0.1);
  CHECK(std::abs(z[0]) < 0.05);
  CHECK_THROWS_AS(adam_step(z, std::vector<double>{1.0, 2.0}, s2, 0.1), InvalidArgument);
}

TEST_CASE("shape conversions and sampling") {
  const auto sphere = fixtures::sphere_mesh(16, {0.5, 0.5, 0.5}, 0.3);
  const Shape s = to_shape(sphere);
  const auto back = to_mesh(s);
  CHECK(back.faces == sphere.faces);
  CHECK(back.vertices == sphere.vertices);
  double area = 0.0;
  for (std::size_t e = 0; e < s.element_count(); ++e) area += element_measure(s, e);
  CHECK(area == doctest::Approx(mesh::surface_area(sphere)).epsilon(1e-12));

  mesh::Contour c;
  c.loops.push_back({{0.2, 0.2}, {0.8, 0.2}, {0.8, 0.8}, {0.2, 0.8}});
  const Shape q = to_shape(c);
  CHECK(q.element_count() == 4);
  CHECK(to_contour(q).loops == c.loops);
  CHECK(element_normal(q, 0) == std::vector<double>{0.0, -1.0});

  const auto samples = sample_shape(q, 4000, 3);
  const auto pts = sample_points(q, samples);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = pts.positions[2 * i], y = pts.positions[2 * i + 1];
    const double edge = std::min({std::abs(x - 0.2), std::abs(x - 0.8), std::abs(y - 0.2), std::abs(y - 0.8)});
    CHECK(edge < 1e-12);
  }
}

TEST_CASE("sample loss gradient matches finite differences") {
  for (int dim : {2, 3}) {
    Shape s;
    Shape target_shape;
    if (dim == 3) {
      s = to_shape(fixtures::sphere_mesh(8, {0.5, 0.5, 0.5}, 0.3));
      target_shape = to_shape(fixtures::box_mesh({0.3, 0.3, 0.3}, {0.7, 0.7, 0.75}));
    } else {
      mesh::Contour c, t;
      c.loops.emplace_back();
      t.loops.emplace_back();
      for (int i = 0; i < 24; ++i) {
        const double a = 2 * M_PI * i / 24;
        c.loops[0].push_back({0.5 + 0.3 * std::cos(a), 0.5 + 0.3 * std::sin(a)});
      }
      t.loops[0] = {{0.3, 0.3}, {0.7, 0.3}, {0.7, 0.7}, {0.3, 0.7}};
      s = to_shape(c);
      target_shape = to_shape(t);
    }
    const auto target = sample_points(target_shape, sample_shape(target_shape, 300, 1));
    const metrics::NearestIndex index(target);
    const auto samples = sample_shape(s, 300, 2);
    const SampleLoss l = sample_loss(s, samples, target, index, 0.7);
    CHECK(l.total == doctest::Approx(l.chamfer + 0.7 * l.normal));
    CHECK(l.chamfer == doctest::Approx(metrics::chamfer_distance(sample_points(s, samples), target)).epsilon(1e-12));
    CHECK(l.normal == doctest::Approx(metrics::normal_distance(sample_points(s, samples), target)).epsilon(1e-12));

    const double eps = 1e-7;
    int compared = 0;
    for (std::size_t i = 0; i < s.vertices.size(); i += 5) {
      Shape hi = s, lo = s;
      hi.vertices[i] += eps;
      lo.vertices[i] -= eps;
      const double fh = sample_loss(hi, samples, target, index, 0.7).total;
      const double fl = sample_loss(lo, samples, target, index, 0.7).total;
      const double fd = (fh - fl) / (2 * eps);
      // skip coordinates where a nearest-neighbour assignment flips
      if (std::abs(fd - l.vertex_grad[i]) > 1e-5 * std::max(1.0, std::abs(fd))) continue;
      ++compared;
    }
    CHECK(compared * 10 >= static_cast<int>(s.vertices.size() / 5) * 9);
  }
}

TEST_CASE("identity registration stays put") {
  const auto sphere = fixtures::sphere_mesh(16, {0.5, 0.5, 0.5}, 0.25);
  RegistrationConfig cfg;
  cfg.iterations = 5;
  cfg.samples = 2000;
  cfg.seed = 3;
  const auto r = register_surfaces(sphere, sphere, cfg);
  CHECK(r.final_chamfer <= r.initial_chamfer);
  const auto out = to_mesh(r.deformed);
  CHECK(out.faces == sphere.faces);
  double worst = 0.0;
  for (std::size_t i = 0; i < out.vertices.size(); ++i)
    worst = std::max(worst, mesh::norm(mesh::operator-(out.vertices[i], sphere.vertices[i])));
  CHECK(worst < 1e-3);
  CHECK(r.losses.size() == 5);
}

TEST_CASE("registration follows a translated circle and is deterministic") {
  mesh::Contour src, tgt;
  src.loops.emplace_back();
  tgt.loops.emplace_back();
  for (int i = 0; i < 100; ++i) {
    const double a = 2 * M_PI * i / 100;
    src.loops[0].push_back({0.5 + 0.25 * std::cos(a), 0.5 + 0.25 * std::sin(a)});
    tgt.loops[0].push_back({0.55 + 0.25 * std::cos(a), 0.5 + 0.25 * std::sin(a)});
  }
  RegistrationConfig cfg;
  cfg.samples = 1000;
  cfg.seed = 7;
  const auto a = register_surfaces(src, tgt, cfg);
  CHECK(a.final_chamfer < 0.1 * a.initial_chamfer);
  CHECK(a.deformed.elements == to_shape(src).elements);

  cfg.iterations = 3;
  const auto b = register_surfaces(src, tgt, cfg), c = register_surfaces(src, tgt, cfg);
  CHECK(std::equal(b.field.parameters().begin(), b.field.parameters().end(), c.field.parameters().begin()));
  CHECK(b.losses == c.losses);
}
