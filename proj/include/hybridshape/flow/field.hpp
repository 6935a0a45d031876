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

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hybridshape::flow {

// Stationary velocity field with trainable parameters. Point arrays are
// row-major n x dim.
class Field {
 public:
  virtual ~Field() = default;

  virtual int dim() const = 0;
  virtual std::span<const double> parameters() const = 0;
  virtual std::span<double> parameters() = 0;
  std::size_t parameter_count() const { return parameters().size(); }

  virtual void evaluate(std::span<const double> points, std::span<double> velocity) const = 0;

  // Writes c^T dv/dp into point_grad and v(p) into velocity (each skipped when
  // empty) and adds c^T dv/dtheta into param_grad.
  virtual void evaluate_vjp(std::span<const double> points, std::span<const double> cotangent,
                            std::span<double> velocity, std::span<double> point_grad,
                            std::span<double> param_grad) const = 0;

  void vjp(std::span<const double> points, std::span<const double> cotangent, std::span<double> point_grad,
           std::span<double> param_grad) const {
    evaluate_vjp(points, cotangent, {}, point_grad, param_grad);
  }
};

// v(p) = A p + b, parameters are A (row-major) then b.
class LinearField final : public Field {
 public:
  explicit LinearField(int dim);
  LinearField(int dim, std::vector<double> matrix, std::vector<double> offset);

  int dim() const override { return dim_; }
  std::span<const double> parameters() const override { return params_; }
  std::span<double> parameters() override { return params_; }

  void evaluate(std::span<const double> points, std::span<double> velocity) const override;
  void evaluate_vjp(std::span<const double> points, std::span<const double> cotangent, std::span<double> velocity,
                    std::span<double> point_grad, std::span<double> param_grad) const override;

 private:
  int dim_;
  std::vector<double> params_;
};

struct FieldConfig {
  int dim = 3;
  double scale = 5.0;    // std of the Fourier frequencies
  int embedding = 128;   // sin and cos features together
  int hidden = 256;
  int depth = 2;         // hidden-to-hidden sine layers
  double omega0 = 30.0;
  std::uint64_t seed = 0;
};

// Random Fourier features followed by sine layers and a linear head. The head
// starts at zero, so a fresh field is the identity flow.
class VelocityField final : public Field {
 public:
  explicit VelocityField(const FieldConfig& cfg);

  const FieldConfig& config() const { return cfg_; }
  int dim() const override { return cfg_.dim; }
  std::span<const double> parameters() const override { return params_; }
  std::span<double> parameters() override { return params_; }
  std::span<const double> frequencies() const { return freq_; }

  void evaluate(std::span<const double> points, std::span<double> velocity) const override;
  void evaluate_vjp(std::span<const double> points, std::span<const double> cotangent, std::span<double> velocity,
                    std::span<double> point_grad, std::span<double> param_grad) const override;

  void save(const std::string& path) const;
  static VelocityField load(const std::string& path);

 private:
  struct Tape;
  struct Layout {
    std::size_t weight, bias;
    int rows, cols;
  };

  void forward_chunk(const double* points, std::size_t n, double* velocity, Tape* tape) const;

  FieldConfig cfg_;
  // Eigen kernels pick summation paths by address alignment, so everything
  // they touch lives on aligned storage to keep results reproducible.
  using AlignedVector = std::vector<double, Eigen::aligned_allocator<double>>;

  AlignedVector freq_;  // (embedding/2) x dim, row-major
  AlignedVector params_;
  std::vector<Layout> layers_;  // sine layers then the head
};

}  // namespace hybridshape::flow
