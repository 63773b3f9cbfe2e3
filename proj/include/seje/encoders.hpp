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

#include <vector>

#include "seje/checkpoint.hpp"
#include "seje/nn.hpp"

namespace seje::encoders {

struct JointConfig {
  int d = 64;
  int lstm_hidden = 64;
  int d_w = 300;
  int d_s = 128;
  int image_height = 32;
  int image_width = 32;
  std::vector<int> image_channels = {8, 16, 16};
  int disc_hidden = 32;
  std::uint64_t seed = 1;

  /// Throws ConfigError unless every dimension is at least 2.
  void validate() const;
};

struct RecipeTrace {
  nn::LstmTrace lstm;
  Vector feature;
  Vector fused_input;
};

struct RecipeInputGrads {
  std::vector<Vector> sentences;
  Vector feature;
};

/// E_R: LSTM over sentence vectors, linear map of the key-term feature, and a
/// fusion layer over the concatenation of both.
class RecipeEncoder {
 public:
  RecipeEncoder() = default;
  RecipeEncoder(const JointConfig& config, Rng& rng);

  Vector forward(const std::vector<Vector>& sentences, const Vector& feature, RecipeTrace* trace = nullptr) const;
  /// Accumulates parameter gradients; returns input gradients.
  RecipeInputGrads backward(const RecipeTrace& trace, const Vector& dout);

  Index out_dim() const { return fusion_.out(); }
  nn::ParamRefs params();

 private:
  nn::Lstm lstm_;
  nn::Linear term_fc_;
  nn::Linear fusion_;
};

struct ImageTrace {
  nn::ConvTrace conv;
  Vector fused_input;
};

struct ImageInputGrads {
  Matrix pixels;
  Vector category;
};

/// E_V: convolutional pixel feature concatenated with the category vector,
/// then a fusion layer.
class ImageEncoder {
 public:
  ImageEncoder() = default;
  ImageEncoder(const JointConfig& config, Rng& rng);

  Vector forward(const Matrix& pixels, const Vector& category, ImageTrace* trace = nullptr) const;
  ImageInputGrads backward(const ImageTrace& trace, const Vector& dout);

  Index out_dim() const { return fusion_.out(); }
  nn::ParamRefs params();

 private:
  Index category_dim_ = 0;
  nn::ConvBackbone backbone_;
  nn::Linear fusion_;
};

struct DiscTrace {
  Vector x;
  Vector z1;
  Vector z2;
  double score = 0.0;
};

/// F_D: Linear-ReLU-Linear-ReLU-Linear with scalar score s; confidence sigmoid(s).
class Discriminator {
 public:
  Discriminator() = default;
  Discriminator(const JointConfig& config, Rng& rng);

  double score(const Vector& x, DiscTrace* trace = nullptr) const;
  double confidence(const Vector& x) const { return nn::sigmoid(score(x)); }

  /// ds/dx at the traced point.
  Vector input_gradient(const DiscTrace& trace) const;
  /// Accumulates ds/dtheta scaled by `dscore`; returns dscore * ds/dx.
  Vector backward(const DiscTrace& trace, double dscore);
  /// Accumulates d(G . ds/dx)/dtheta with ReLU masks held fixed.
  void input_gradient_backward(const DiscTrace& trace, const Vector& G);

  Index in_dim() const { return l1_.in(); }
  nn::ParamRefs params();

  nn::Linear l1_;
  nn::Linear l2_;
  nn::Linear l3_;
};

}  // namespace seje::encoders
