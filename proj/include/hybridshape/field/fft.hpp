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
#include <span>
#include <vector>

namespace hybridshape::field {

// Real-to-complex FFT over an r^d periodic grid. The spectrum uses the
// half-complex layout: the last axis keeps r/2 + 1 frequencies.
class RealFft {
 public:
  RealFft(int dim, int resolution);

  int dim() const { return dim_; }
  int resolution() const { return res_; }
  std::size_t real_size() const { return real_size_; }
  std::size_t spectrum_size() const { return spectrum_size_; }

  // Unnormalized forward transform.
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  // Unnormalized inverse transform (caller divides by real_size() for IFFT).
  // `in` is copied, it is not modified.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  int dim_;
  int res_;
  std::size_t real_size_;
  std::size_t spectrum_size_;
  void* forward_plan_;
  void* inverse_plan_;
};

// Signed integer frequency for index k on an axis of length r: k for k < r/2,
// k - r otherwise (so the Nyquist index maps to -r/2).
inline int signed_frequency(int k, int r) { return k < r / 2 ? k : k - r; }

}  // namespace hybridshape::field
