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

#include "hybridshape/hybrid/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hybridshape/error.hpp"
#include "hybridshape/field/dpsr.hpp"
#include "hybridshape/flow/integrate.hpp"

namespace hybridshape::hybrid {

std::vector<double> trailing_mean(const std::vector<double>& values, int window) {
  if (window < 1) throw InvalidArgument("smoothing window must be positive");
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i >= static_cast<std::size_t>(window)) sum -= values[i - window];
    out[i] = sum / static_cast<double>(std::min<std::size_t>(i + 1, window));
  }
  return out;
}

HybridResult optimize_oriented_points(const field::ScalarGrid& target_chi, const field::OrientedPointCloud& init,
                                      const HybridConfig& cfg) {
  const int d = init.dim();
  if (init.size() < 4) throw InvalidArgument("at least 4 points are required");
  if (target_chi.dim() != d) throw InvalidArgument("target and cloud dimensions differ");
  if (target_chi.resolution() != cfg.resolution) throw InvalidArgument("target resolution differs from config");
  if (!(cfg.lr > 0.0) || cfg.iterations < 0) throw InvalidArgument("invalid optimizer config");
  target_chi.require_finite("target indicator");

  const field::DpsrParams params{cfg.resolution, cfg.sigma, cfg.m};
  const field::ScalarGrid weight =
      cfg.edge_weighting ? field::edge_weight_map(target_chi) : field::ScalarGrid{};
  auto loss_of = [&](const field::ScalarGrid& chi) {
    return cfg.edge_weighting ? field::wmse_loss(chi, target_chi, weight) : field::mse_loss(chi, target_chi);
  };

  const std::size_t n = init.positions().size();
  std::vector<double> theta(2 * n), grad(2 * n);
  std::copy(init.positions().begin(), init.positions().end(), theta.begin());
  std::copy(init.normals().begin(), init.normals().end(), theta.begin() + n);
  field::OrientedPointCloud cloud = init;
  flow::AdamState adam;

  HybridResult out;
  for (int it = 0; it < cfg.iterations; ++it) {
    field::DpsrResult fwd = field::dpsr_forward(cloud, params);
    const field::LossResult loss = loss_of(fwd.chi);
    if (!std::isfinite(loss.value))
      throw NumericalError("hybrid optimization diverged at iteration " + std::to_string(it));
    out.losses.push_back(loss.value);
    if (cfg.on_iteration) cfg.on_iteration(it, loss.value);

    const field::DpsrGradients g = field::dpsr_backward(fwd.tape, loss.gradient);
    std::copy(g.positions.begin(), g.positions.end(), grad.begin());
    std::copy(g.normals.begin(), g.normals.end(), grad.begin() + n);
    if (!std::all_of(grad.begin(), grad.end(), [](double x) { return std::isfinite(x); }))
      throw NumericalError("hybrid optimization diverged at iteration " + std::to_string(it));
    flow::adam_step(theta, grad, adam, cfg.lr);
    if (!std::all_of(theta.begin(), theta.end(), [](double x) { return std::isfinite(x); }))
      throw NumericalError("hybrid optimization diverged at iteration " + std::to_string(it));

    cloud = field::OrientedPointCloud(d, {theta.begin(), theta.begin() + n}, {theta.begin() + n, theta.end()});
    std::copy(cloud.positions().begin(), cloud.positions().end(), theta.begin());
    std::copy(cloud.normals().begin(), cloud.normals().end(), theta.begin() + n);
    const auto& nrm = cloud.normals();
    for (std::size_t i = 0; i < nrm.size(); i += d) {
      double len2 = 0.0;
      for (int c = 0; c < d; ++c) len2 += nrm[i + c] * nrm[i + c];
      out.max_normal_error = std::max(out.max_normal_error, std::abs(std::sqrt(len2) - 1.0));
    }
  }

  field::DpsrResult last = field::dpsr_forward(cloud, params);
  out.final_loss = loss_of(last.chi).value;
  if (!std::isfinite(out.final_loss))
    throw NumericalError("hybrid optimization diverged at iteration " + std::to_string(cfg.iterations));
  out.chi = std::move(last.chi);
  out.cloud = std::move(cloud);
  out.smoothed = trailing_mean(out.losses, cfg.smoothing_window);
  return out;
}

}  // namespace hybridshape::hybrid
