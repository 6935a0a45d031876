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

#include "hybridshape/field/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "hybridshape/error.hpp"

namespace hybridshape::field {

namespace {

// FFTW planning is not thread safe; plans are created once per shape under a
// lock and then executed concurrently through the new-array interface.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

PlanPair get_plans(int dim, int r) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find({dim, r});
  if (it != cache.end()) return it->second;
  int n[3] = {r, r, r};
  std::size_t real = 1;
  for (int a = 0; a < dim; ++a) real *= r;
  const std::size_t spec = real / r * (r / 2 + 1);
  double* rbuf = fftw_alloc_real(real);
  fftw_complex* cbuf = fftw_alloc_complex(spec);
  PlanPair p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.forward = fftw_plan_dft_r2c(dim, n, rbuf, cbuf, flags);
  p.inverse = fftw_plan_dft_c2r(dim, n, cbuf, rbuf, flags | FFTW_DESTROY_INPUT);
  fftw_free(rbuf);
  fftw_free(cbuf);
  if (!p.forward || !p.inverse) throw Error("FFTW plan creation failed");
  cache.emplace(std::make_pair(dim, r), p);
  return p;
}

}  // namespace

RealFft::RealFft(int dim, int resolution) : dim_(dim), res_(resolution) {
  if (dim != 2 && dim != 3) throw InvalidArgument("FFT dimension must be 2 or 3");
  if (resolution < 2 || resolution % 2 != 0) throw InvalidArgument("FFT resolution must be even");
  real_size_ = 1;
  for (int a = 0; a < dim; ++a) real_size_ *= resolution;
  spectrum_size_ = real_size_ / resolution * (resolution / 2 + 1);
  const PlanPair p = get_plans(dim, resolution);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != real_size_ || out.size() != spectrum_size_) throw InvalidArgument("FFT buffer size mismatch");
  // r2c does not modify its input.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (in.size() != spectrum_size_ || out.size() != real_size_) throw InvalidArgument("FFT buffer size mismatch");
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
}

}  // namespace hybridshape::field
