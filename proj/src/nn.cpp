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

#include "seje/nn.hpp"

#include <cmath>

namespace seje::nn {

void zero_grads(const ParamRefs& params) {
  for (Param* p : params) p->zero_grad();
}

std::vector<Matrix> snapshot(const ParamRefs& params) {
  std::vector<Matrix> out;
  out.reserve(params.size());
  for (const Param* p : params) out.push_back(p->value);
  return out;
}

Matrix fan_in_uniform(Index rows, Index cols, Index fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<Index>(fan_in, 1)));
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = rng.uniform(-bound, bound);
  return m;
}

Vector relu(const Vector& x) { return x.cwiseMax(0.0); }

Vector relu_backward(const Vector& x, const Vector& dy) {
  Vector dx(x.size());
  for (Index i = 0; i < x.size(); ++i) dx[i] = x[i] > 0 ? dy[i] : 0.0;
  return dx;
}

Vector softmax(const Vector& logits) {
  const double mx = logits.maxCoeff();
  Vector e = (logits.array() - mx).exp().matrix();
  return e / e.sum();
}

Index argmax(const Vector& v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

// ---------------------------------------------------------------------------

Linear::Linear(const std::string& name, Index in, Index out, Rng& rng)
    : weight(name + ".weight", fan_in_uniform(out, in, in, rng)),
      bias(name + ".bias", fan_in_uniform(out, 1, in, rng)) {}

Vector Linear::forward(const Vector& x) const {
  if (x.size() != in()) throw Error(weight.name + ": input size " + std::to_string(x.size()) + " != " + std::to_string(in()));
  return weight.value * x + bias.value.col(0);
}

Vector Linear::backward(const Vector& x, const Vector& dy) {
  weight.grad.noalias() += dy * x.transpose();
  bias.grad.col(0) += dy;
  return weight.value.transpose() * dy;
}

Embedding::Embedding(const std::string& name, Index vocab, Index dim, Rng& rng) {
  Matrix init(vocab, dim);
  for (Index c = 0; c < dim; ++c)
    for (Index r = 0; r < vocab; ++r) init(r, c) = 0.1 * rng.normal();
  table = Param(name + ".table", std::move(init));
}

// ---------------------------------------------------------------------------

Lstm::Lstm(const std::string& name, Index in, Index hidden, Rng& rng)
    : input_weight(name + ".input_weight", fan_in_uniform(4 * hidden, in, hidden, rng)),
      recurrent_weight(name + ".recurrent_weight", fan_in_uniform(4 * hidden, hidden, hidden, rng)),
      bias(name + ".bias", fan_in_uniform(4 * hidden, 1, hidden, rng)) {
  // forget gate starts open
  bias.value.block(hidden, 0, hidden, 1).array() += 1.0;
}

LstmTrace Lstm::forward(std::span<const Vector> inputs) const {
  return forward(inputs, Vector::Zero(hidden()), Vector::Zero(hidden()));
}

LstmTrace Lstm::forward(std::span<const Vector> inputs, const Vector& h0, const Vector& c0) const {
  const Index H = hidden();
  LstmTrace tr;
  tr.h0 = h0;
  tr.c0 = c0;
  tr.inputs.assign(inputs.begin(), inputs.end());
  tr.gates.reserve(inputs.size());
  tr.cells.reserve(inputs.size());
  tr.hidden.reserve(inputs.size());
  Vector h = h0;
  Vector c = c0;
  for (const Vector& x : inputs) {
    if (x.size() != in()) throw Error(input_weight.name + ": input size mismatch");
    Vector z = input_weight.value * x + recurrent_weight.value * h + bias.value.col(0);
    for (Index k = 0; k < H; ++k) {
      z[k] = sigmoid(z[k]);
      z[H + k] = sigmoid(z[H + k]);
      z[2 * H + k] = std::tanh(z[2 * H + k]);
      z[3 * H + k] = sigmoid(z[3 * H + k]);
    }
    c = z.segment(H, H).cwiseProduct(c) + z.segment(0, H).cwiseProduct(z.segment(2 * H, H));
    h = z.segment(3 * H, H).cwiseProduct(c.array().tanh().matrix());
    tr.gates.push_back(std::move(z));
    tr.cells.push_back(c);
    tr.hidden.push_back(h);
  }
  return tr;
}

LstmGrads Lstm::backward(const LstmTrace& tr, std::span<const Vector> dhidden) {
  const Index H = hidden();
  const std::size_t T = tr.inputs.size();
  LstmGrads out;
  out.inputs.resize(T);
  Vector dh_next = Vector::Zero(H);
  Vector dc_next = Vector::Zero(H);
  Vector dz(4 * H);
  for (std::size_t s = T; s-- > 0;) {
    const Vector& gates = tr.gates[s];
    const Vector& c = tr.cells[s];
    const Vector& c_prev = s == 0 ? tr.c0 : tr.cells[s - 1];
    const Vector& h_prev = s == 0 ? tr.h0 : tr.hidden[s - 1];
    Vector dh = dh_next;
    if (s < dhidden.size() && dhidden[s].size() == H) dh += dhidden[s];
    for (Index k = 0; k < H; ++k) {
      const double ig = gates[k], fg = gates[H + k], gg = gates[2 * H + k], og = gates[3 * H + k];
      const double tc = std::tanh(c[k]);
      const double dc = dh[k] * og * (1.0 - tc * tc) + dc_next[k];
      dz[k] = dc * gg * ig * (1.0 - ig);
      dz[H + k] = dc * c_prev[k] * fg * (1.0 - fg);
      dz[2 * H + k] = dc * ig * (1.0 - gg * gg);
      dz[3 * H + k] = dh[k] * tc * og * (1.0 - og);
      dc_next[k] = dc * fg;
    }
    input_weight.grad.noalias() += dz * tr.inputs[s].transpose();
    recurrent_weight.grad.noalias() += dz * h_prev.transpose();
    bias.grad.col(0) += dz;
    out.inputs[s] = input_weight.value.transpose() * dz;
    dh_next = recurrent_weight.value.transpose() * dz;
  }
  out.h0 = dh_next;
  out.c0 = dc_next;
  return out;
}

// ---------------------------------------------------------------------------

Conv2d::Conv2d(const std::string& name, int in_channels, int out_channels, int kernel_size, int stride_, int pad_,
               Rng& rng)
    : weight(name + ".weight", fan_in_uniform(out_channels, in_channels * kernel_size * kernel_size,
                                              in_channels * kernel_size * kernel_size, rng)),
      bias(name + ".bias", fan_in_uniform(out_channels, 1, in_channels * kernel_size * kernel_size, rng)),
      kernel(kernel_size),
      stride(stride_),
      pad(pad_) {}

Shape2d Conv2d::output_shape(const Shape2d& in) const {
  return {static_cast<int>(weight.value.rows()), (in.height + 2 * pad - kernel) / stride + 1,
          (in.width + 2 * pad - kernel) / stride + 1};
}

Matrix Conv2d::unfold(const Matrix& x, const Shape2d& in, const Shape2d& out) const {
  const int kk = kernel * kernel;
  Matrix cols = Matrix::Zero(in.channels * kk, out.height * out.width);
  for (int c = 0; c < in.channels; ++c)
    for (int ky = 0; ky < kernel; ++ky)
      for (int kx = 0; kx < kernel; ++kx) {
        const int row = c * kk + ky * kernel + kx;
        for (int oy = 0; oy < out.height; ++oy) {
          const int iy = oy * stride - pad + ky;
          if (iy < 0 || iy >= in.height) continue;
          for (int ox = 0; ox < out.width; ++ox) {
            const int ix = ox * stride - pad + kx;
            if (ix < 0 || ix >= in.width) continue;
            cols(row, oy * out.width + ox) = x(c, iy * in.width + ix);
          }
        }
      }
  return cols;
}

Matrix Conv2d::fold(const Matrix& cols, const Shape2d& in, const Shape2d& out) const {
  const int kk = kernel * kernel;
  Matrix x = Matrix::Zero(in.channels, in.height * in.width);
  for (int c = 0; c < in.channels; ++c)
    for (int ky = 0; ky < kernel; ++ky)
      for (int kx = 0; kx < kernel; ++kx) {
        const int row = c * kk + ky * kernel + kx;
        for (int oy = 0; oy < out.height; ++oy) {
          const int iy = oy * stride - pad + ky;
          if (iy < 0 || iy >= in.height) continue;
          for (int ox = 0; ox < out.width; ++ox) {
            const int ix = ox * stride - pad + kx;
            if (ix < 0 || ix >= in.width) continue;
            x(c, iy * in.width + ix) += cols(row, oy * out.width + ox);
          }
        }
      }
  return x;
}

Matrix Conv2d::forward(const Matrix& x, const Shape2d& in, Matrix* columns) const {
  if (x.rows() != in.channels || x.cols() != in.height * in.width) throw Error(weight.name + ": input shape mismatch");
  const Shape2d out = output_shape(in);
  Matrix cols = unfold(x, in, out);
  Matrix y = weight.value * cols;
  y.colwise() += bias.value.col(0);
  if (columns) *columns = std::move(cols);
  return y;
}

Matrix Conv2d::backward(const Matrix& columns, const Matrix& dy, const Shape2d& in) {
  const Shape2d out = output_shape(in);
  weight.grad.noalias() += dy * columns.transpose();
  bias.grad.col(0) += dy.rowwise().sum();
  Matrix dcols = weight.value.transpose() * dy;
  return fold(dcols, in, out);
}

// ---------------------------------------------------------------------------

ConvBackbone::ConvBackbone(const std::string& name, Shape2d input, std::vector<int> channels, Rng& rng)
    : input_(input) {
  Shape2d shape = input;
  for (std::size_t b = 0; b < channels.size(); ++b) {
    blocks_.emplace_back(name + ".conv" + std::to_string(b), shape.channels, channels[b], 3, 2, 1, rng);
    shapes_.push_back(shape);
    shape = blocks_.back().output_shape(shape);
  }
  shapes_.push_back(shape);
}

Index ConvBackbone::feature_size() const {
  const Shape2d& s = shapes_.back();
  return static_cast<Index>(s.channels) * s.height * s.width;
}

Vector ConvBackbone::forward(const Matrix& image, ConvTrace* trace) const {
  Matrix x = image;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    Matrix cols;
    Matrix pre = blocks_[b].forward(x, shapes_[b], &cols);
    x = pre.cwiseMax(0.0);
    if (trace) {
      trace->columns.push_back(std::move(cols));
      trace->pre_activations.push_back(std::move(pre));
    }
  }
  // flatten channel-major
  Vector feature(x.size());
  for (Index c = 0; c < x.rows(); ++c) feature.segment(c * x.cols(), x.cols()) = x.row(c).transpose();
  return feature;
}

Matrix ConvBackbone::backward(const ConvTrace& trace, const Vector& dfeature) {
  const Shape2d& last = shapes_.back();
  Matrix dx(last.channels, last.height * last.width);
  for (Index c = 0; c < dx.rows(); ++c) dx.row(c) = dfeature.segment(c * dx.cols(), dx.cols()).transpose();
  for (std::size_t b = blocks_.size(); b-- > 0;) {
    const Matrix& pre = trace.pre_activations[b];
    Matrix dpre = (pre.array() > 0.0).select(dx, 0.0);
    dx = blocks_[b].backward(trace.columns[b], dpre, shapes_[b]);
  }
  return dx;
}

ParamRefs ConvBackbone::params() {
  ParamRefs out;
  for (Conv2d& b : blocks_)
    for (Param* p : b.params()) out.push_back(p);
  return out;
}

}  // namespace seje::nn
