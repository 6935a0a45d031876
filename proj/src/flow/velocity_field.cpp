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

#include <Eigen/Dense>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "hybridshape/error.hpp"
#include "hybridshape/flow/field.hpp"
#include "hybridshape/parallel.hpp"
#include "hybridshape/rng.hpp"
#include "vmath.hpp"

namespace hybridshape::flow {

namespace {

using Mat = Eigen::MatrixXd;
using CMap = Eigen::Map<const Eigen::MatrixXd>;
using MMap = Eigen::Map<Eigen::MatrixXd>;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr std::size_t kChunk = 128;
constexpr std::uint64_t kFrequencyStream = 10;
constexpr std::uint64_t kWeightStream = 11;
constexpr char kMagic[4] = {'H', 'S', 'V', 'F'};
constexpr std::uint32_t kVersion = 1;

void check_sizes(int dim, std::span<const double> points, std::span<const double> out) {
  if (points.size() % dim != 0) throw InvalidArgument("point array is not a multiple of the dimension");
  if (out.size() != points.size()) throw InvalidArgument("output size does not match points");
}

}  // namespace

LinearField::LinearField(int dim) : dim_(dim), params_(static_cast<std::size_t>(dim * dim + dim), 0.0) {
  if (dim < 1) throw InvalidArgument("dimension must be positive");
}

LinearField::LinearField(int dim, std::vector<double> matrix, std::vector<double> offset) : LinearField(dim) {
  if (matrix.size() != static_cast<std::size_t>(dim * dim) || offset.size() != static_cast<std::size_t>(dim))
    throw InvalidArgument("linear field shape mismatch");
  std::copy(matrix.begin(), matrix.end(), params_.begin());
  std::copy(offset.begin(), offset.end(), params_.begin() + dim * dim);
}

void LinearField::evaluate(std::span<const double> points, std::span<double> velocity) const {
  check_sizes(dim_, points, velocity);
  const double* a = params_.data();
  const double* b = a + dim_ * dim_;
  for (std::size_t i = 0; i < points.size() / dim_; ++i)
    for (int r = 0; r < dim_; ++r) {
      double v = b[r];
      for (int c = 0; c < dim_; ++c) v += a[r * dim_ + c] * points[i * dim_ + c];
      velocity[i * dim_ + r] = v;
    }
}

void LinearField::evaluate_vjp(std::span<const double> points, std::span<const double> cotangent,
                               std::span<double> velocity, std::span<double> point_grad,
                               std::span<double> param_grad) const {
  check_sizes(dim_, points, cotangent);
  if (!velocity.empty()) evaluate(points, velocity);
  if (param_grad.size() != params_.size()) throw InvalidArgument("parameter gradient size mismatch");
  const double* a = params_.data();
  for (std::size_t i = 0; i < points.size() / dim_; ++i) {
    const double* p = &points[i * dim_];
    const double* g = &cotangent[i * dim_];
    for (int r = 0; r < dim_; ++r) {
      for (int c = 0; c < dim_; ++c) param_grad[r * dim_ + c] += g[r] * p[c];
      param_grad[dim_ * dim_ + r] += g[r];
    }
    if (!point_grad.empty())
      for (int c = 0; c < dim_; ++c) {
        double s = 0.0;
        for (int r = 0; r < dim_; ++r) s += a[r * dim_ + c] * g[r];
        point_grad[i * dim_ + c] = s;
      }
  }
}

struct VelocityField::Tape {
  Mat features;
  std::vector<Mat> act, dact;
};

VelocityField::VelocityField(const FieldConfig& cfg) : cfg_(cfg) {
  if (cfg.dim < 1) throw InvalidArgument("dimension must be positive");
  if (cfg.embedding < 2 || cfg.embedding % 2 != 0) throw InvalidArgument("embedding length must be even and >= 2");
  if (cfg.hidden < 1 || cfg.depth < 0) throw InvalidArgument("invalid hidden layer shape");
  if (!(cfg.scale > 0.0) || !(cfg.omega0 > 0.0)) throw InvalidArgument("scale and omega0 must be positive");

  const int f = cfg.embedding / 2;
  Rng frng = Rng::derive(cfg.seed, kFrequencyStream);
  freq_.resize(static_cast<std::size_t>(f) * cfg.dim);
  for (auto& x : freq_) x = cfg.scale * frng.normal();

  std::size_t offset = 0;
  const auto pad = [](std::size_t x) { return (x + 7) / 8 * 8; };
  const auto add = [&](int rows, int cols) {
    const std::size_t bias = pad(offset + static_cast<std::size_t>(rows) * cols);
    layers_.push_back({offset, bias, rows, cols});
    offset = pad(bias + rows);
  };
  add(cfg.hidden, cfg.embedding);
  for (int l = 0; l < cfg.depth; ++l) add(cfg.hidden, cfg.hidden);
  add(cfg.dim, cfg.hidden);
  params_.assign(layers_.back().bias + layers_.back().rows, 0.0);

  Rng wrng = Rng::derive(cfg.seed, kWeightStream);
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
    const Layout& ly = layers_[l];
    const double w = l == 0 ? 1.0 / ly.cols : std::sqrt(6.0 / ly.cols) / cfg.omega0;
    const double b = 1.0 / std::sqrt(static_cast<double>(ly.cols));
    for (std::size_t i = 0; i < static_cast<std::size_t>(ly.rows) * ly.cols; ++i)
      params_[ly.weight + i] = wrng.uniform(-w, w);
    for (int i = 0; i < ly.rows; ++i) params_[ly.bias + i] = wrng.uniform(-b, b);
  }
}

void VelocityField::forward_chunk(const double* points, std::size_t n, double* velocity, Tape* tape) const {
  const int d = cfg_.dim, f = cfg_.embedding / 2;
  const auto cols = static_cast<Eigen::Index>(n);
  const Eigen::Map<const RowMat> freq(freq_.data(), f, d);
  const Mat p = CMap(points, d, cols);
  const Mat angle = (2.0 * M_PI) * (freq * p);

  Mat local;
  Mat& features = tape ? tape->features : local;
  features.resize(2 * f, cols);
  {
    Mat s(f, cols), c(f, cols);
    detail::sin_cos(angle.data(), s.data(), c.data(), angle.size());
    features.topRows(f) = s;
    features.bottomRows(f) = c;
  }

  const std::size_t sine_layers = layers_.size() - 1;
  if (tape) {
    tape->act.resize(sine_layers);
    tape->dact.resize(sine_layers);
  }
  Mat z, a_local, prev;
  const Mat* in = &features;
  for (std::size_t l = 0; l < sine_layers; ++l) {
    const Layout& ly = layers_[l];
    const CMap w(params_.data() + ly.weight, ly.rows, ly.cols);
    const Eigen::Map<const Eigen::VectorXd> b(params_.data() + ly.bias, ly.rows);
    z.noalias() = w * *in;
    z.colwise() += b;
    z *= cfg_.omega0;
    Mat& a = tape ? tape->act[l] : (l % 2 == 0 ? a_local : prev);
    a.resize(ly.rows, cols);
    if (tape) {
      tape->dact[l].resize(ly.rows, cols);
      detail::sin_cos(z.data(), a.data(), tape->dact[l].data(), z.size());
    } else {
      detail::sin_only(z.data(), a.data(), z.size());
    }
    in = &a;
  }
  const Layout& head = layers_.back();
  Mat v(d, cols);
  v.noalias() = CMap(params_.data() + head.weight, head.rows, head.cols) * *in;
  v.colwise() += Eigen::Map<const Eigen::VectorXd>(params_.data() + head.bias, head.rows);
  MMap(velocity, d, cols) = v;
}

void VelocityField::evaluate(std::span<const double> points, std::span<double> velocity) const {
  check_sizes(cfg_.dim, points, velocity);
  const std::size_t n = points.size() / cfg_.dim;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      const std::size_t lo = c * kChunk, m = std::min(kChunk, n - lo);
      forward_chunk(points.data() + lo * cfg_.dim, m, velocity.data() + lo * cfg_.dim, nullptr);
    }
  }, 1);
}

void VelocityField::evaluate_vjp(std::span<const double> points, std::span<const double> cotangent,
                                 std::span<double> velocity, std::span<double> point_grad,
                                 std::span<double> param_grad) const {
  check_sizes(cfg_.dim, points, cotangent);
  if (!velocity.empty() && velocity.size() != points.size()) throw InvalidArgument("velocity size mismatch");
  if (param_grad.size() != params_.size()) throw InvalidArgument("parameter gradient size mismatch");
  if (!point_grad.empty() && point_grad.size() != points.size()) throw InvalidArgument("point gradient size mismatch");
  const int d = cfg_.dim, f = cfg_.embedding / 2;
  const std::size_t n = points.size() / d;
  const Eigen::Map<const RowMat> freq(freq_.data(), f, d);
  std::vector<double> scratch(kChunk * d);
  AlignedVector acc(params_.size(), 0.0);
  Tape tape;
  Mat adj, zbar, g;
  for (std::size_t lo = 0; lo < n; lo += kChunk) {
    const std::size_t m = std::min(kChunk, n - lo);
    const auto cols = static_cast<Eigen::Index>(m);
    forward_chunk(points.data() + lo * d, m, velocity.empty() ? scratch.data() : velocity.data() + lo * d, &tape);
    g = CMap(cotangent.data() + lo * d, d, cols);

    const Layout& head = layers_.back();
    MMap(acc.data() + head.weight, head.rows, head.cols).noalias() += g * tape.act.back().transpose();
    Eigen::Map<Eigen::VectorXd>(acc.data() + head.bias, head.rows) += g.rowwise().sum();
    adj.noalias() = CMap(params_.data() + head.weight, head.rows, head.cols).transpose() * g;

    for (std::size_t l = layers_.size() - 1; l-- > 0;) {
      const Layout& ly = layers_[l];
      zbar = cfg_.omega0 * adj.cwiseProduct(tape.dact[l]);
      const Mat& in = l == 0 ? tape.features : tape.act[l - 1];
      MMap(acc.data() + ly.weight, ly.rows, ly.cols).noalias() += zbar * in.transpose();
      Eigen::Map<Eigen::VectorXd>(acc.data() + ly.bias, ly.rows) += zbar.rowwise().sum();
      if (l > 0 || !point_grad.empty())
        adj.noalias() = CMap(params_.data() + ly.weight, ly.rows, ly.cols).transpose() * zbar;
    }
    if (!point_grad.empty()) {
      const Mat ebar = adj.topRows(f).cwiseProduct(tape.features.bottomRows(f)) -
                       adj.bottomRows(f).cwiseProduct(tape.features.topRows(f));
      const Mat pbar = (2.0 * M_PI) * (freq.transpose() * ebar);
      MMap(point_grad.data() + lo * d, d, cols) = pbar;
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i) param_grad[i] += acc[i];
}

void VelocityField::save(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path);
    const auto put = [&](const auto& v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); };
    out.write(kMagic, 4);
    put(kVersion);
    put(static_cast<std::int32_t>(cfg_.dim));
    put(cfg_.scale);
    put(static_cast<std::int32_t>(cfg_.embedding));
    put(static_cast<std::int32_t>(cfg_.hidden));
    put(static_cast<std::int32_t>(cfg_.depth));
    put(cfg_.seed);
    put(cfg_.omega0);
    put(static_cast<std::uint64_t>(params_.size()));
    out.write(reinterpret_cast<const char*>(params_.data()), static_cast<std::streamsize>(params_.size() * sizeof(double)));
    if (!out) throw InvalidArgument("cannot write " + path);
  }
  std::filesystem::rename(tmp, path);
}

VelocityField VelocityField::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  const auto get = [&](auto& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw InvalidArgument("truncated velocity field file " + path);
  };
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw InvalidArgument("not a velocity field file: " + path);
  std::uint32_t version;
  get(version);
  if (version != kVersion) throw InvalidArgument("unsupported velocity field version");
  std::int32_t d, l, h, depth;
  FieldConfig cfg;
  get(d);
  get(cfg.scale);
  get(l);
  get(h);
  get(depth);
  get(cfg.seed);
  get(cfg.omega0);
  cfg.dim = d;
  cfg.embedding = l;
  cfg.hidden = h;
  cfg.depth = depth;
  VelocityField field(cfg);
  std::uint64_t count;
  get(count);
  if (count != field.params_.size()) throw InvalidArgument("parameter count does not match header");
  in.read(reinterpret_cast<char*>(field.params_.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw InvalidArgument("truncated velocity field file " + path);
  return field;
}

}  // namespace hybridshape::flow
