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

#include "hybridshape/field/dpsr.hpp"

#include <cmath>
#include <complex>

#include "hybridshape/error.hpp"
#include "hybridshape/field/fft.hpp"
#include "hybridshape/field/filters.hpp"

namespace hybridshape::field {

namespace {

using cplx = std::complex<double>;

// Visits every entry of the half-complex spectrum with its signed
// frequency vector. u[c] is the derivative frequency of axis c, already
// zeroed at that axis's Nyquist index.
template <typename Fn>
void for_each_frequency(int dim, int r, Fn&& fn) {
  const int half = r / 2 + 1;
  std::size_t idx = 0;
  if (dim == 2) {
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < half; ++b, ++idx) {
        const double fa = signed_frequency(a, r), fb = b;
        const double norm2 = fa * fa + fb * fb;
        const double u[3] = {a == r / 2 ? 0.0 : fa, b == r / 2 ? 0.0 : fb, 0.0};
        fn(idx, norm2, u);
      }
    return;
  }
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < half; ++c, ++idx) {
        const double fa = signed_frequency(a, r), fb = signed_frequency(b, r), fc = c;
        const double norm2 = fa * fa + fb * fb + fc * fc;
        const double u[3] = {a == r / 2 ? 0.0 : fa, b == r / 2 ? 0.0 : fb, c == r / 2 ? 0.0 : fc};
        fn(idx, norm2, u);
      }
}

void check_kernel(int dim, int res, const SpectralKernel& kernel) {
  if (kernel.dim() != dim || kernel.resolution() != res)
    throw InvalidArgument("spectral kernel resolution does not match the grid");
}

}  // namespace

SpectralKernel::SpectralKernel(int dim, int resolution, double sigma)
    : dim_(dim), res_(resolution), sigma_(sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("kernel sigma must be finite and >= 0");
  RealFft fft(dim, resolution);  // validates the shape
  mult_.resize(fft.spectrum_size());
  const double scale = sigma / resolution;
  for_each_frequency(dim, resolution, [&](std::size_t i, double norm2, const double*) {
    mult_[i] = std::exp(-2.0 * scale * scale * norm2);
  });
}

VectorGrid rasterize(const OrientedPointCloud& cloud, int resolution) {
  if (cloud.empty()) throw InvalidArgument("empty point set");
  if (resolution < 8) throw InvalidArgument("rasterize requires resolution >= 8");
  const int d = cloud.dim();
  VectorGrid q(d, resolution);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.position(i);
    const auto n = cloud.normal(i);
    for (int c = 0; c < d; ++c) splat(q.component(c), d, resolution, p, n[c]);
  }
  return q;
}

ScalarGrid solve_poisson_spectral(const VectorGrid& q, const SpectralKernel& kernel) {
  const int d = q.dim(), r = q.resolution();
  check_kernel(d, r, kernel);
  if (!q.all_finite()) throw InvalidArgument("point-normal field contains non-finite values");
  const RealFft fft(d, r);
  const auto g = kernel.multipliers();
  std::vector<cplx> acc(fft.spectrum_size(), cplx(0.0, 0.0));
  std::vector<cplx> qs(fft.spectrum_size());
  for (int c = 0; c < d; ++c) {
    fft.forward(q.component(c), qs);
    for_each_frequency(d, r, [&](std::size_t i, double norm2, const double* u) {
      if (norm2 == 0.0 || u[c] == 0.0) return;
      const double m = -g[i] * u[c] / (2.0 * M_PI * norm2);
      acc[i] += cplx(0.0, m) * qs[i];
    });
  }
  ScalarGrid chi(d, r);
  fft.inverse(acc, chi.values());
  const double inv_n = 1.0 / static_cast<double>(fft.real_size());
  for (double& v : chi.values()) v *= inv_n;
  return chi;
}

VectorGrid solve_poisson_spectral_adjoint(const ScalarGrid& cotangent, const SpectralKernel& kernel) {
  const int d = cotangent.dim(), r = cotangent.resolution();
  check_kernel(d, r, kernel);
  const RealFft fft(d, r);
  const auto g = kernel.multipliers();
  std::vector<cplx> gs(fft.spectrum_size());
  fft.forward(cotangent.values(), gs);
  VectorGrid out(d, r);
  std::vector<cplx> comp(fft.spectrum_size());
  const double inv_n = 1.0 / static_cast<double>(fft.real_size());
  for (int c = 0; c < d; ++c) {
    std::fill(comp.begin(), comp.end(), cplx(0.0, 0.0));
    for_each_frequency(d, r, [&](std::size_t i, double norm2, const double* u) {
      if (norm2 == 0.0 || u[c] == 0.0) return;
      const double m = -g[i] * u[c] / (2.0 * M_PI * norm2);
      comp[i] = cplx(0.0, -m) * gs[i];
    });
    auto dst = out.component(c);
    fft.inverse(comp, dst);
    for (double& v : dst) v *= inv_n;
  }
  return out;
}

ScalarGrid normalize_indicator(const ScalarGrid& chi_prime, const OrientedPointCloud& cloud, double m,
                               NormalizationStats* stats) {
  chi_prime.require_finite("unnormalized indicator");
  if (cloud.empty()) throw InvalidArgument("empty point set");
  if (cloud.dim() != chi_prime.dim()) throw InvalidArgument("point cloud and grid dimensions differ");
  double mean = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) mean += interpolate(chi_prime, cloud.position(i));
  mean /= static_cast<double>(cloud.size());

  NormalizationStats s;
  s.point_mean = mean;
  s.reference = chi_prime[0] - mean;
  ScalarGrid chi(chi_prime.dim(), chi_prime.resolution());
  double spread = 0.0;
  for (double v : chi_prime.values()) spread = std::max(spread, std::abs(v - mean));
  if (spread < 1e-12) {
    s.degenerate_zero = true;
  } else {
    if (std::abs(s.reference) < 1e-12) throw NumericalError("degenerate normalization reference");
    const double denom = std::abs(s.reference);
    for (std::size_t i = 0; i < chi.size(); ++i) chi[i] = (-m * (chi_prime[i] - mean)) / denom;
  }
  if (stats) *stats = s;
  return chi;
}

ScalarGrid AdjointTape::replay() const {
  const VectorGrid q = rasterize(cloud_, params_.resolution);
  const ScalarGrid chi_prime = solve_poisson_spectral(q, *kernel_);
  return normalize_indicator(chi_prime, cloud_, params_.m);
}

DpsrResult dpsr_forward(const OrientedPointCloud& cloud, const DpsrParams& params) {
  DpsrResult result;
  AdjointTape& tape = result.tape;
  tape.cloud_ = cloud;
  tape.params_ = params;
  tape.kernel_ = std::make_shared<SpectralKernel>(cloud.dim(), params.resolution, params.sigma);
  const VectorGrid q = rasterize(cloud, params.resolution);
  tape.chi_prime_ = solve_poisson_spectral(q, *tape.kernel_);
  tape.output_ = normalize_indicator(tape.chi_prime_, cloud, params.m, &tape.stats_);
  result.chi = tape.output_;
  return result;
}

DpsrGradients dpsr_backward(AdjointTape& tape, const ScalarGrid& cotangent) {
  if (tape.consumed_) throw InvalidArgument("adjoint tape already consumed");
  if (!cotangent.same_shape(tape.output_)) throw InvalidArgument("cotangent resolution does not match the tape");
  cotangent.require_finite("cotangent");
  tape.consumed_ = true;

  const OrientedPointCloud& cloud = tape.cloud_;
  const int d = cloud.dim();
  const int r = tape.params_.resolution;
  const std::size_t k = cloud.size();
  DpsrGradients grads;
  grads.positions.assign(k * d, 0.0);
  grads.normals.assign(k * d, 0.0);
  if (tape.stats_.degenerate_zero) return grads;

  // Normalization: chi = s (chi' - mu), s = -m / |chi'_0 - mu|.
  const ScalarGrid& chi_prime = tape.chi_prime_;
  const double mu = tape.stats_.point_mean;
  const double ref = tape.stats_.reference;
  const double m = tape.params_.m;
  const double s = -m / std::abs(ref);
  double sum_g = 0.0, inner = 0.0;
  for (std::size_t i = 0; i < cotangent.size(); ++i) {
    sum_g += cotangent[i];
    inner += cotangent[i] * (chi_prime[i] - mu);
  }
  const double dscale_dref = m * (ref > 0.0 ? 1.0 : -1.0) / (ref * ref);
  const double dmu = -s * sum_g - inner * dscale_dref;

  ScalarGrid dchi_prime(d, r);
  for (std::size_t i = 0; i < dchi_prime.size(); ++i) dchi_prime[i] = s * cotangent[i];
  dchi_prime[0] += inner * dscale_dref;
  const double per_point = dmu / static_cast<double>(k);
  std::vector<double> grad(d);
  for (std::size_t i = 0; i < k; ++i) {
    const auto p = cloud.position(i);
    splat(dchi_prime.values(), d, r, p, per_point);
    interpolate_with_gradient(chi_prime.values(), d, r, p, grad);
    for (int a = 0; a < d; ++a) grads.positions[i * d + a] += per_point * grad[a];
  }

  // Spectral solve and rasterization.
  const VectorGrid dq = solve_poisson_spectral_adjoint(dchi_prime, *tape.kernel_);
  for (std::size_t i = 0; i < k; ++i) {
    const auto p = cloud.position(i);
    const auto n = cloud.normal(i);
    for (int c = 0; c < d; ++c) {
      const double v = interpolate_with_gradient(dq.component(c), d, r, p, grad);
      grads.normals[i * d + c] = v;
      for (int a = 0; a < d; ++a) grads.positions[i * d + a] += n[c] * grad[a];
    }
  }
  return grads;
}

ScalarGrid edge_weight_map(const ScalarGrid& chi_gt, bool rescale) {
  chi_gt.require_finite("target indicator");
  ScalarGrid w = gaussian_blur(sobel_magnitude(chi_gt), 7, 1.0);
  for (double& v : w.values()) v = std::max(v, 0.0);
  if (rescale) {
    const double peak = w.max_value();
    if (peak > 0.0)
      for (double& v : w.values()) v /= peak;
  }
  return w;
}

LossResult wmse_loss(const ScalarGrid& pred, const ScalarGrid& gt, const ScalarGrid& weight) {
  if (!pred.same_shape(gt) || !pred.same_shape(weight))
    throw InvalidArgument("loss grids have mismatched resolution");
  LossResult out;
  out.gradient = ScalarGrid(pred.dim(), pred.resolution());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = pred[i] - gt[i];
    const double w2 = weight[i] * weight[i];
    out.value += w2 * diff * diff;
    out.gradient[i] = 2.0 * w2 * diff;
  }
  return out;
}

LossResult mse_loss(const ScalarGrid& pred, const ScalarGrid& gt) {
  if (!pred.same_shape(gt)) throw InvalidArgument("loss grids have mismatched resolution");
  LossResult out;
  out.gradient = ScalarGrid(pred.dim(), pred.resolution());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = pred[i] - gt[i];
    out.value += diff * diff;
    out.gradient[i] = 2.0 * diff;
  }
  return out;
}

}  // namespace hybridshape::field
