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

#include "hybridshape/flow/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "hybridshape/error.hpp"

namespace hybridshape::flow {

namespace {

void require_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) throw NumericalError("velocity blow-up");
}

// x + a * k
void axpy_into(std::vector<double>& out, const std::vector<double>& x, double a, const std::vector<double>& k) {
  out.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * k[i];
}

}  // namespace

int step_count(double t0, double t1, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("step size must be positive");
  const double span = std::abs(t1 - t0);
  if (span == 0.0) return 0;
  return std::max(1, static_cast<int>(std::ceil(span / h * (1.0 - 1e-12))));
}

FlowTrajectory integrate(const Field& field, std::span<const double> points, double t0, double t1, double h,
                         bool retain) {
  const int d = field.dim();
  if (points.size() % d != 0) throw InvalidArgument("point array is not a multiple of the dimension");
  FlowTrajectory tr;
  tr.dim = d;
  tr.t0 = t0;
  tr.t1 = t1;
  tr.initial.assign(points.begin(), points.end());
  const int n = step_count(t0, t1, h);
  const double dir = t1 < t0 ? -1.0 : 1.0;
  for (int s = 0; s < n; ++s) tr.steps.push_back(s + 1 < n ? dir * h : (t1 - t0) - dir * h * (n - 1));

  std::vector<double> x = tr.initial, k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size()), x2, x3, x4;
  for (double dt : tr.steps) {
    field.evaluate(x, k1);
    require_finite(k1);
    axpy_into(x2, x, 0.5 * dt, k1);
    field.evaluate(x2, k2);
    require_finite(k2);
    axpy_into(x3, x, 0.5 * dt, k2);
    field.evaluate(x3, k3);
    require_finite(k3);
    axpy_into(x4, x, dt, k3);
    field.evaluate(x4, k4);
    require_finite(k4);
    if (retain) {
      std::vector<double> st;
      st.reserve(4 * x.size());
      for (const auto* v : {&x, &x2, &x3, &x4}) st.insert(st.end(), v->begin(), v->end());
      tr.stages.push_back(std::move(st));
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  tr.final = std::move(x);
  return tr;
}

namespace {

FlowGradients discrete_grad(const Field& field, const FlowTrajectory& tr, std::span<const double> cot) {
  if (!tr.retained()) throw InvalidArgument("discrete gradients need a retained trajectory");
  const std::size_t m = tr.initial.size();
  FlowGradients out;
  out.parameters.assign(field.parameter_count(), 0.0);
  std::vector<double> g(cot.begin(), cot.end()), xbar(m), kbar(m), u(m);
  for (std::size_t s = tr.steps.size(); s-- > 0;) {
    const double dt = tr.steps[s];
    const double* st = tr.stages[s].data();
    const auto stage = [&](int i) { return std::span<const double>(st + i * m, m); };
    // stage 4 feeds from k3 with weight dt, stages 3 and 2 with dt/2
    const double weight[4] = {dt / 6.0, dt / 3.0, dt / 3.0, dt / 6.0};
    const double feed[4] = {0.0, 0.5 * dt, 0.5 * dt, dt};
    xbar = g;
    std::fill(u.begin(), u.end(), 0.0);
    for (int i = 3; i >= 0; --i) {
      for (std::size_t j = 0; j < m; ++j) kbar[j] = weight[i] * g[j] + (i < 3 ? feed[i + 1] * u[j] : 0.0);
      field.vjp(stage(i), kbar, u, out.parameters);
      for (std::size_t j = 0; j < m; ++j) xbar[j] += u[j];
    }
    g.swap(xbar);
  }
  out.points = std::move(g);
  return out;
}

FlowGradients adjoint_grad(const Field& field, const FlowTrajectory& tr, std::span<const double> cot) {
  const std::size_t m = tr.final.size();
  FlowGradients out;
  out.parameters.assign(field.parameter_count(), 0.0);
  std::vector<double> x = tr.final, a(cot.begin(), cot.end());
  std::vector<double> xs(m), as(m), kx[4], ka[4], c(m), u(m);
  for (auto& v : kx) v.resize(m);
  for (auto& v : ka) v.resize(m);
  for (std::size_t s = tr.steps.size(); s-- > 0;) {
    const double dt = tr.steps[s], b = -dt;
    const double weight[4] = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
    const double feed[4] = {0.0, 0.5 * b, 0.5 * b, b};
    for (int i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        xs[j] = i == 0 ? x[j] : x[j] + feed[i] * kx[i - 1][j];
        as[j] = i == 0 ? a[j] : a[j] + feed[i] * ka[i - 1][j];
        c[j] = dt * weight[i] * as[j];
      }
      // d theta_bar / dt = -a^T dv/dtheta, integrated from t1 down to t0
      field.evaluate_vjp(xs, c, kx[i], u, out.parameters);
      for (std::size_t j = 0; j < m; ++j) ka[i][j] = -u[j] / (dt * weight[i]);
      require_finite(kx[i]);
    }
    for (std::size_t j = 0; j < m; ++j) {
      x[j] += b / 6.0 * (kx[0][j] + 2.0 * kx[1][j] + 2.0 * kx[2][j] + kx[3][j]);
      a[j] += b / 6.0 * (ka[0][j] + 2.0 * ka[1][j] + 2.0 * ka[2][j] + ka[3][j]);
    }
  }
  out.points = std::move(a);
  return out;
}

}  // namespace

FlowGradients integrate_grad(const Field& field, const FlowTrajectory& trajectory, std::span<const double> cotangents,
                             GradientMode mode) {
  if (trajectory.dim != field.dim()) throw InvalidArgument("trajectory dimension does not match field");
  if (cotangents.size() != trajectory.final.size()) throw InvalidArgument("cotangent size does not match points");
  return mode == GradientMode::discrete ? discrete_grad(field, trajectory, cotangents)
                                        : adjoint_grad(field, trajectory, cotangents);
}

double invertibility_check(const Field& field, std::span<const double> points, double h) {
  const FlowTrajectory fwd = integrate(field, points, 0.0, 1.0, h);
  const FlowTrajectory back = integrate(field, fwd.final, 1.0, 0.0, h);
  const int d = field.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); i += d) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += (back.final[i + k] - points[i + k]) * (back.final[i + k] - points[i + k]);
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr, double beta1,
               double beta2, double eps) {
  if (grads.size() != params.size()) throw InvalidArgument("gradient size does not match parameters");
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size()) throw InvalidArgument("optimizer state size does not match parameters");
  ++state.t;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grads[i];
    state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grads[i] * grads[i];
    params[i] -= lr * (state.m[i] / c1) / (std::sqrt(state.v[i] / c2) + eps);
  }
}

}  // namespace hybridshape::flow
