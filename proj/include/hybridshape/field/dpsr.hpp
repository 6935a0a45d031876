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

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "hybridshape/field/grid.hpp"

namespace hybridshape::field {

// Spectral Gaussian g(u) = exp(-2 (sigma |u| / r)^2) over the half-complex
// frequency layout of an r^d grid. sigma is in grid cells; sigma = 0 gives
// the all-ones kernel.
class SpectralKernel {
 public:
  SpectralKernel(int dim, int resolution, double sigma);

  int dim() const { return dim_; }
  int resolution() const { return res_; }
  double sigma() const { return sigma_; }
  std::span<const double> multipliers() const { return mult_; }

 private:
  int dim_;
  int res_;
  double sigma_;
  std::vector<double> mult_;
};

// Splats every normal onto the 2^d surrounding cells with multilinear weights.
VectorGrid rasterize(const OrientedPointCloud& cloud, int resolution);

// Unnormalized indicator: FFT each component of q, form (i u . q~) / (-2 pi |u|^2)
// times the kernel, inverse FFT. The zero frequency is set to 0, so the
// result has zero mean. The derivative factor i u_c is zero at the Nyquist
// index of axis c, which keeps the spectrum Hermitian and the output real.
ScalarGrid solve_poisson_spectral(const VectorGrid& q, const SpectralKernel& kernel);

// Transpose of solve_poisson_spectral: maps a cotangent on chi' back to q.
VectorGrid solve_poisson_spectral_adjoint(const ScalarGrid& cotangent, const SpectralKernel& kernel);

// Scalars produced by normalization, needed by the adjoint.
struct NormalizationStats {
  double point_mean = 0.0;  // mean of chi' interpolated at the cloud points
  double reference = 0.0;   // chi'(corner) - point_mean
  bool degenerate_zero = false;  // chi' had no variation; output is all zeros
};

// chi = -m (chi' - mean_P chi') / |chi'(corner) - mean_P chi'|.
// The corner is the center of cell 0, so chi(corner) = -m exactly and the
// interior of a shape with outward normals is positive.
ScalarGrid normalize_indicator(const ScalarGrid& chi_prime, const OrientedPointCloud& cloud, double m,
                               NormalizationStats* stats = nullptr);

// Parameters of the rasterize -> solve -> normalize chain.
struct DpsrParams {
  int resolution = 64;
  double sigma = 2.0;
  double m = 0.5;
};

struct DpsrResult;
struct DpsrGradients;
class AdjointTape;

DpsrResult dpsr_forward(const OrientedPointCloud& cloud, const DpsrParams& params);

// Gradients of a scalar loss whose gradient w.r.t. chi is `cotangent`.
DpsrGradients dpsr_backward(AdjointTape& tape, const ScalarGrid& cotangent);

// Record of one forward DPSR evaluation. Single use: dpsr_backward consumes it.
class AdjointTape {
 public:
  const OrientedPointCloud& cloud() const { return cloud_; }
  const DpsrParams& params() const { return params_; }
  const ScalarGrid& chi_prime() const { return chi_prime_; }
  const ScalarGrid& output() const { return output_; }
  const NormalizationStats& stats() const { return stats_; }
  bool consumed() const { return consumed_; }

  // Recomputes the forward chain from the recorded inputs.
  ScalarGrid replay() const;

 private:
  friend DpsrResult dpsr_forward(const OrientedPointCloud&, const DpsrParams&);
  friend DpsrGradients dpsr_backward(AdjointTape&, const ScalarGrid&);

  OrientedPointCloud cloud_;
  DpsrParams params_;
  std::shared_ptr<const SpectralKernel> kernel_;
  ScalarGrid chi_prime_;
  ScalarGrid output_;
  NormalizationStats stats_;
  bool consumed_ = false;
};

struct DpsrResult {
  ScalarGrid chi;
  AdjointTape tape;
};

struct DpsrGradients {
  std::vector<double> positions;  // K * d, d loss / d p
  std::vector<double> normals;    // K * d, d loss / d n
};

// Smoothed Sobel edge magnitude of a target indicator (kernel 7, std 1,
// replicate padding), optionally rescaled to a maximum of 1.
ScalarGrid edge_weight_map(const ScalarGrid& chi_gt, bool rescale = true);

struct LossResult {
  double value = 0.0;
  ScalarGrid gradient;
};

// sum (w (pred - gt))^2 and its gradient 2 w^2 (pred - gt).
LossResult wmse_loss(const ScalarGrid& pred, const ScalarGrid& gt, const ScalarGrid& weight);
// Unweighted sum of squares, same as wmse_loss with w = 1.
LossResult mse_loss(const ScalarGrid& pred, const ScalarGrid& gt);

}  // namespace hybridshape::field
