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

#include "hybridshape/flow/registration.hpp"

#include <cmath>
#include <string>

#include "hybridshape/error.hpp"
#include "hybridshape/metrics/metrics.hpp"
#include "hybridshape/rng.hpp"

namespace hybridshape::flow {

namespace {

constexpr std::uint64_t kEvalStream = 0x5eed;

FieldConfig field_config(const RegistrationConfig& cfg, int dim) {
  FieldConfig fc = cfg.field;
  fc.dim = dim;
  fc.seed = cfg.seed;
  return fc;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return Rng::derive(seed, stream).next(); }

}  // namespace

// Both shapes draw from the same stream, so identical shapes give identical
// samples and zero loss.
double shape_chamfer(const Shape& a, const Shape& b, std::size_t samples, std::uint64_t seed) {
  const auto pa = sample_points(a, sample_shape(a, samples, seed));
  const auto pb = sample_points(b, sample_shape(b, samples, seed));
  return metrics::chamfer_distance(pa, pb);
}

RegistrationResult register_shapes(const Shape& source, const Shape& target, const RegistrationConfig& cfg) {
  if (source.dim != target.dim) throw InvalidArgument("source and target dimensions differ");
  if (source.element_count() == 0 || target.element_count() == 0) throw InvalidArgument("empty surface");
  if (cfg.iterations < 0 || !(cfg.lr > 0.0) || cfg.samples == 0) throw InvalidArgument("invalid registration config");

  RegistrationResult out{VelocityField(field_config(cfg, source.dim)), source, {}, 0.0, 0.0};
  VelocityField& field = out.field;
  const std::uint64_t eval_seed = stream_seed(cfg.seed, kEvalStream);
  out.initial_chamfer = shape_chamfer(source, target, cfg.samples, eval_seed);

  AdamState adam;
  Shape moving = source;
  for (int it = 0; it < cfg.iterations; ++it) {
    const bool retain = cfg.mode == GradientMode::discrete;
    const FlowTrajectory tr = integrate(field, source.vertices, 0.0, 1.0, cfg.h, retain);
    moving.vertices = tr.final;

    const std::uint64_t round = stream_seed(cfg.seed, it + 100);
    const auto tgt = sample_points(target, sample_shape(target, cfg.samples, round));
    const metrics::NearestIndex tgt_index(tgt);
    const auto samples = sample_shape(moving, cfg.samples, round);
    const SampleLoss loss = sample_loss(moving, samples, tgt, tgt_index, cfg.normal_weight);
    if (!std::isfinite(loss.total))
      throw NumericalError("registration diverged at iteration " + std::to_string(it));
    out.losses.push_back(loss.total);
    if (cfg.on_iteration) cfg.on_iteration(it, loss.total);

    const FlowGradients g = integrate_grad(field, tr, loss.vertex_grad, cfg.mode);
    adam_step(field.parameters(), g.parameters, adam, cfg.lr);
  }
  out.deformed.vertices = integrate(field, source.vertices, 0.0, 1.0, cfg.h).final;
  out.final_chamfer = shape_chamfer(out.deformed, target, cfg.samples, eval_seed);
  return out;
}

RegistrationResult register_surfaces(const mesh::SurfaceMesh& source, const mesh::SurfaceMesh& target,
                                     const RegistrationConfig& cfg) {
  return register_shapes(to_shape(source), to_shape(target), cfg);
}

RegistrationResult register_surfaces(const mesh::Contour& source, const mesh::Contour& target,
                                     const RegistrationConfig& cfg) {
  return register_shapes(to_shape(source), to_shape(target), cfg);
}

}  // namespace hybridshape::flow
