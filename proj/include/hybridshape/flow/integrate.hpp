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

#include <cstdint>
#include <span>
#include <vector>

#include "hybridshape/flow/field.hpp"

namespace hybridshape::flow {

struct FlowTrajectory {
  int dim = 0;
  double t0 = 0.0, t1 = 1.0;
  std::vector<double> steps;  // signed step sizes; the last one may be truncated
  std::vector<double> initial, final;
  // Per step, the four RK4 stage inputs (4 * n * dim). Empty unless retained.
  std::vector<std::vector<double>> stages;

  std::size_t size() const { return dim == 0 ? 0 : initial.size() / dim; }
  bool retained() const { return !steps.empty() && stages.size() == steps.size(); }
};

int step_count(double t0, double t1, double h);

// Classical RK4 on dp/dt = v(p). Integrates backward when t1 < t0.
FlowTrajectory integrate(const Field& field, std::span<const double> points, double t0 = 0.0, double t1 = 1.0,
                         double h = 0.2, bool retain = false);

enum class GradientMode { discrete, adjoint };

struct FlowGradients {
  std::vector<double> parameters;
  std::vector<double> points;  // d loss / d initial points
};

// Gradients of a scalar loss whose cotangent on the final points is given.
// discrete: backpropagation through the stored stages (needs a retained
// trajectory). adjoint: the adjoint ODE solved backward with RK4.
FlowGradients integrate_grad(const Field& field, const FlowTrajectory& trajectory,
                             std::span<const double> cotangents, GradientMode mode = GradientMode::discrete);

// Max distance after flowing t0 -> t1 and back.
double invertibility_check(const Field& field, std::span<const double> points, double h = 0.2);

struct AdamState {
  std::vector<double> m, v;
  std::int64_t t = 0;
};

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

}  // namespace hybridshape::flow
