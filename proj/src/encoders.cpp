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

#include "seje/encoders.hpp"

#include <string>

namespace seje::encoders {

void JointConfig::validate() const {
  auto check = [](int v, const char* name) {
    if (v < 2) throw ConfigError(std::string(name) + " must be at least 2");
  };
  check(d, "d");
  check(lstm_hidden, "lstm_hidden");
  check(d_w, "d_w");
  check(d_s, "d_s");
  check(disc_hidden, "disc_hidden");
  if (image_height < 8 || image_width < 8) throw ConfigError("image resolution must be at least 8x8");
  if (image_channels.size() != 3) throw ConfigError("image_channels needs exactly 3 entries");
}

static void check_dim(Index got, Index want, const char* what) {
  if (got != want)
    throw Error(std::string(what) + " has dimension " + std::to_string(got) + ", expected " + std::to_string(want));
}

RecipeEncoder::RecipeEncoder(const JointConfig& c, Rng& rng)
    : lstm_("recipe.lstm", c.d_s, c.lstm_hidden, rng),
      term_fc_("recipe.terms", c.d_w, c.lstm_hidden, rng),
      fusion_("recipe.fusion", 2 * c.lstm_hidden, c.d, rng) {}

nn::ParamRefs RecipeEncoder::params() {
  nn::ParamRefs out = lstm_.params();
  for (auto* p : term_fc_.params()) out.push_back(p);
  for (auto* p : fusion_.params()) out.push_back(p);
  return out;
}

Vector RecipeEncoder::forward(const std::vector<Vector>& sentences, const Vector& feature, RecipeTrace* trace) const {
  if (sentences.empty()) throw Error("recipe encoder needs at least one sentence vector");
  for (const auto& s : sentences) check_dim(s.size(), lstm_.in(), "sentence vector");
  check_dim(feature.size(), term_fc_.in(), "key-term feature");
  nn::LstmTrace lt = lstm_.forward(sentences);
  const Index h = lstm_.hidden();
  Vector fused(2 * h);
  fused.head(h) = lt.hidden.back();
  fused.tail(h) = term_fc_.forward(feature);
  Vector out = fusion_.forward(fused);
  if (trace) {
    trace->lstm = std::move(lt);
    trace->feature = feature;
    trace->fused_input = std::move(fused);
  }
  return out;
}

RecipeInputGrads RecipeEncoder::backward(const RecipeTrace& trace, const Vector& dout) {
  const Index h = lstm_.hidden();
  const Vector dfused = fusion_.backward(trace.fused_input, dout);
  RecipeInputGrads g;
  g.feature = term_fc_.backward(trace.feature, dfused.tail(h));
  std::vector<Vector> dhidden(trace.lstm.hidden.size(), Vector::Zero(h));
  dhidden.back() = dfused.head(h);
  g.sentences = lstm_.backward(trace.lstm, dhidden).inputs;
  return g;
}

ImageEncoder::ImageEncoder(const JointConfig& c, Rng& rng) : category_dim_(c.d_w) {
  backbone_ = nn::ConvBackbone("image.backbone", nn::Shape2d{3, c.image_height, c.image_width}, c.image_channels, rng);
  fusion_ = nn::Linear("image.fusion", backbone_.feature_size() + c.d_w, c.d, rng);
}

nn::ParamRefs ImageEncoder::params() {
  nn::ParamRefs out = backbone_.params();
  for (auto* p : fusion_.params()) out.push_back(p);
  return out;
}

Vector ImageEncoder::forward(const Matrix& pixels, const Vector& category, ImageTrace* trace) const {
  const nn::Shape2d& s = backbone_.input_shape();
  if (pixels.rows() != s.channels || pixels.cols() != static_cast<Index>(s.height) * s.width)
    throw Error("image does not match the configured resolution");
  check_dim(category.size(), category_dim_, "category vector");
  nn::ConvTrace ct;
  const Vector feature = backbone_.forward(pixels, trace ? &ct : nullptr);
  Vector fused(feature.size() + category.size());
  fused << feature, category;
  Vector out = fusion_.forward(fused);
  if (trace) {
    trace->conv = std::move(ct);
    trace->fused_input = std::move(fused);
  }
  return out;
}

ImageInputGrads ImageEncoder::backward(const ImageTrace& trace, const Vector& dout) {
  const Vector dfused = fusion_.backward(trace.fused_input, dout);
  const Index f = backbone_.feature_size();
  ImageInputGrads g;
  g.category = dfused.tail(category_dim_);
  g.pixels = backbone_.backward(trace.conv, dfused.head(f));
  return g;
}

Discriminator::Discriminator(const JointConfig& c, Rng& rng)
    : l1_("disc.l1", c.d, c.disc_hidden, rng),
      l2_("disc.l2", c.disc_hidden, c.disc_hidden, rng),
      l3_("disc.l3", c.disc_hidden, 1, rng) {}

nn::ParamRefs Discriminator::params() {
  nn::ParamRefs out = l1_.params();
  for (auto* p : l2_.params()) out.push_back(p);
  for (auto* p : l3_.params()) out.push_back(p);
  return out;
}

double Discriminator::score(const Vector& x, DiscTrace* trace) const {
  check_dim(x.size(), l1_.in(), "discriminator input");
  const Vector z1 = l1_.forward(x);
  const Vector z2 = l2_.forward(nn::relu(z1));
  const double s = l3_.forward(nn::relu(z2))[0];
  if (trace) *trace = DiscTrace{x, z1, z2, s};
  return s;
}

Vector Discriminator::input_gradient(const DiscTrace& t) const {
  const Vector w3 = l3_.weight.value.row(0).transpose();
  const Vector v2 = nn::relu_backward(t.z2, w3);
  const Vector v1 = nn::relu_backward(t.z1, l2_.input_grad(v2));
  return l1_.input_grad(v1);
}

Vector Discriminator::backward(const DiscTrace& t, double dscore) {
  const Vector a1 = nn::relu(t.z1);
  const Vector a2 = nn::relu(t.z2);
  const Vector da2 = l3_.backward(a2, Vector::Constant(1, dscore));
  const Vector da1 = l2_.backward(a1, nn::relu_backward(t.z2, da2));
  return l1_.backward(t.x, nn::relu_backward(t.z1, da1));
}

// g = W1^T v1, v1 = m1 . (W2^T v2), v2 = m2 . w3. Biases do not enter g.
void Discriminator::input_gradient_backward(const DiscTrace& t, const Vector& G) {
  const Vector w3 = l3_.weight.value.row(0).transpose();
  const Vector v2 = nn::relu_backward(t.z2, w3);
  const Vector v1 = nn::relu_backward(t.z1, l2_.input_grad(v2));
  l1_.weight.grad += v1 * G.transpose();
  const Vector dv1 = l1_.weight.value * G;
  const Vector du1 = nn::relu_backward(t.z1, dv1);
  l2_.weight.grad += v2 * du1.transpose();
  const Vector dv2 = l2_.weight.value * du1;
  l3_.weight.grad.row(0) += nn::relu_backward(t.z2, dv2).transpose();
}

}  // namespace seje::encoders
