/* Copyright 2026 The SEJE Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <span>
#include <string>
#include <vector>

#include "seje/common.hpp"
#include "seje/rng.hpp"

namespace seje::nn {

/// A named trainable tensor with its accumulated gradient.
struct Param {
  std::string name;
  Matrix value;
  Matrix grad;

  Param() = default;
  Param(std::string param_name, Matrix init)
      : name(std::move(param_name)), value(std::move(init)), grad(Matrix::Zero(value.rows(), value.cols())) {}

  void zero_grad() { grad.setZero(); }
};

using ParamRefs = std::vector<Param*>;

void zero_grads(const ParamRefs& params);
/// Deep copy of parameter values, used for snapshot comparisons.
std::vector<Matrix> snapshot(const ParamRefs& params);

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) initialisation.
Matrix fan_in_uniform(Index rows, Index cols, Index fan_in, Rng& rng);

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// ln(1 + exp(x)) without overflow.
inline double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

Vector relu(const Vector& x);
/// dy masked by x > 0.
Vector relu_backward(const Vector& x, const Vector& dy);
Vector softmax(const Vector& logits);
/// Index of the maximum entry; lowest index wins ties.
Index argmax(const Vector& v);

/// y = W x + b.
class Linear {
 public:
  Linear() = default;
  Linear(const std::string& name, Index in, Index out, Rng& rng);

  Vector forward(const Vector& x) const;
  /// Accumulates parameter gradients and returns dL/dx.
  Vector backward(const Vector& x, const Vector& dy);
  Vector input_grad(const Vector& dy) const { return weight.value.transpose() * dy; }

  Index in() const { return weight.value.cols(); }
  Index out() const { return weight.value.rows(); }
  ParamRefs params() { return {&weight, &bias}; }

  Param weight;
  Param bias;
};

/// Token embedding lookup table.
class Embedding {
 public:
  Embedding() = default;
  Embedding(const std::string& name, Index vocab, Index dim, Rng& rng);

  Vector lookup(Index token) const { return table.value.row(token).transpose(); }
  void backward(Index token, const Vector& dy) { table.grad.row(token) += dy.transpose(); }
  Index dim() const { return table.value.cols(); }
  ParamRefs params() { return {&table}; }

  Param table;
};

/// Per-step activations kept for backpropagation through time.
struct LstmTrace {
  std::vector<Vector> inputs;
  std::vector<Vector> gates;  // [i; f; g; o] after nonlinearity
  std::vector<Vector> cells;
  std::vector<Vector> hidden;
  Vector h0;
  Vector c0;
};

struct LstmGrads {
  std::vector<Vector> inputs;
  Vector h0;
  Vector c0;
};

/// Single-layer LSTM. Gate order in the stacked weights is input, forget,
/// cell candidate, output.
class Lstm {
 public:
  Lstm() = default;
  Lstm(const std::string& name, Index in, Index hidden, Rng& rng);

  LstmTrace forward(std::span<const Vector> inputs) const;
  LstmTrace forward(std::span<const Vector> inputs, const Vector& h0, const Vector& c0) const;
  /// `dhidden[t]` is dL/dh_t from outside the recurrence (may be zero).
  LstmGrads backward(const LstmTrace& trace, std::span<const Vector> dhidden);

  Index in() const { return input_weight.value.cols(); }
  Index hidden() const { return recurrent_weight.value.cols(); }
  ParamRefs params() { return {&input_weight, &recurrent_weight, &bias}; }

  Param input_weight;
  Param recurrent_weight;
  Param bias;
};

/// Feature map layout: channels x (height * width), row-major spatial index.
struct Shape2d {
  int channels = 0;
  int height = 0;
  int width = 0;
};

class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(const std::string& name, int in_channels, int out_channels, int kernel, int stride, int pad, Rng& rng);

  Shape2d output_shape(const Shape2d& in) const;
  /// Returns the output map; `columns` receives the unrolled patches.
  Matrix forward(const Matrix& x, const Shape2d& in, Matrix* columns) const;
  /// Accumulates parameter gradients and returns dL/dx.
  Matrix backward(const Matrix& columns, const Matrix& dy, const Shape2d& in);

  ParamRefs params() { return {&weight, &bias}; }

  Param weight;  // out x (in * k * k)
  Param bias;    // out x 1
  int kernel = 3;
  int stride = 1;
  int pad = 1;

 private:
  Matrix unfold(const Matrix& x, const Shape2d& in, const Shape2d& out) const;
  Matrix fold(const Matrix& columns, const Shape2d& in, const Shape2d& out) const;
};

struct ConvTrace {
  std::vector<Matrix> columns;
  std::vector<Matrix> pre_activations;
};

/// Three stride-2 conv + ReLU blocks followed by flattening.
class ConvBackbone {
 public:
  ConvBackbone() = default;
  ConvBackbone(const std::string& name, Shape2d input, std::vector<int> channels, Rng& rng);

  Index feature_size() const;
  Vector forward(const Matrix& image, ConvTrace* trace) const;
  /// Returns dL/dimage.
  Matrix backward(const ConvTrace& trace, const Vector& dfeature);

  const Shape2d& input_shape() const { return input_; }
  ParamRefs params();

 private:
  Shape2d input_;
  std::vector<Conv2d> blocks_;
  std::vector<Shape2d> shapes_;  // input shape of each block, then final output
};

}  // namespace seje::nn
