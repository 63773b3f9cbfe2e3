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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "seje/encoders.hpp"

namespace seje::encoders {
namespace {

using seje::testing::kFdTolerance;
using seje::testing::numeric_gradient;
using seje::testing::random_matrix;
using seje::testing::random_vector;
using seje::testing::relative_error;
using seje::testing::worst_param_error;

JointConfig small_config() {
  JointConfig c;
  c.d = 5;
  c.lstm_hidden = 4;
  c.d_w = 6;
  c.d_s = 3;
  c.image_height = 8;
  c.image_width = 8;
  c.image_channels = {2, 3, 4};
  c.disc_hidden = 5;
  return c;
}

std::vector<Vector> random_sentences(Rng& rng, int n, int dim) {
  std::vector<Vector> s;
  for (int i = 0; i < n; ++i) s.push_back(random_vector(rng, dim));
  return s;
}

TEST(JointConfig, Validation) {
  EXPECT_NO_THROW(small_config().validate());
  JointConfig c = small_config();
  c.d = 1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.image_channels = {2, 3};
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(RecipeEncoder, OutputLengthForAnyInputLength) {
  Rng rng(1);
  const RecipeEncoder enc(small_config(), rng);
  for (int n = 1; n < 8; ++n) EXPECT_EQ(enc.forward(random_sentences(rng, n, 3), random_vector(rng, 6)).size(), 5);
}

TEST(RecipeEncoder, DimensionMismatchAndEmptyInputAreErrors) {
  Rng rng(2);
  const RecipeEncoder enc(small_config(), rng);
  EXPECT_THROW(enc.forward(random_sentences(rng, 2, 4), random_vector(rng, 6)), Error);
  EXPECT_THROW(enc.forward(random_sentences(rng, 2, 3), random_vector(rng, 5)), Error);
  EXPECT_THROW(enc.forward({}, random_vector(rng, 6)), Error);
}

TEST(RecipeEncoder, GradientsMatchFiniteDifferences) {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    Rng rng(seed);
    RecipeEncoder enc(small_config(), rng);
    std::vector<Vector> s = random_sentences(rng, 4, 3);
    Vector f = random_vector(rng, 6);
    const Vector w = random_vector(rng, 5);
    auto loss = [&] { return w.dot(enc.forward(s, f)); };
    RecipeInputGrads g;
    const double err = worst_param_error(
        enc.params(),
        [&] {
          RecipeTrace tr;
          enc.forward(s, f, &tr);
          g = enc.backward(tr, w);
          return loss();
        },
        loss);
    EXPECT_LT(err, kFdTolerance);
    EXPECT_LT(relative_error(g.feature, numeric_gradient(loss, f)), kFdTolerance);
    for (std::size_t t = 0; t < s.size(); ++t)
      EXPECT_LT(relative_error(g.sentences[t], numeric_gradient(loss, s[t])), kFdTolerance);
  }
}

TEST(RecipeEncoder, ZeroInputsAreDeterministic) {
  Rng a(3), b(3);
  const RecipeEncoder e1(small_config(), a), e2(small_config(), b);
  const std::vector<Vector> zeros(3, Vector::Zero(3));
  const Vector out = e1.forward(zeros, Vector::Zero(6));
  EXPECT_EQ(out, e1.forward(zeros, Vector::Zero(6)));
  EXPECT_EQ(out, e2.forward(zeros, Vector::Zero(6)));
}

TEST(RecipeEncoder, OrderSensitiveCounterexample) {
  Rng rng(4);
  const RecipeEncoder enc(small_config(), rng);
  const std::vector<Vector> s = random_sentences(rng, 3, 3);
  const std::vector<Vector> reversed(s.rbegin(), s.rend());
  const Vector f = random_vector(rng, 6);
  EXPECT_GT((enc.forward(s, f) - enc.forward(reversed, f)).norm(), 1e-6);
}

TEST(ImageEncoder, ShapeDeterminismAndGradients) {
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    Rng rng(seed);
    ImageEncoder enc(small_config(), rng);
    Matrix px = random_matrix(rng, 3, 64);
    Vector cat = random_vector(rng, 6);
    const Vector out = enc.forward(px, cat);
    EXPECT_EQ(out.size(), 5);
    EXPECT_EQ(out, enc.forward(px, cat));
    const Vector w = random_vector(rng, 5);
    auto loss = [&] { return w.dot(enc.forward(px, cat)); };
    ImageInputGrads g;
    const double err = worst_param_error(
        enc.params(),
        [&] {
          ImageTrace tr;
          enc.forward(px, cat, &tr);
          g = enc.backward(tr, w);
          return loss();
        },
        loss);
    EXPECT_LT(err, kFdTolerance);
    EXPECT_LT(relative_error(g.category, numeric_gradient(loss, cat)), kFdTolerance);
    EXPECT_LT(relative_error(g.pixels, numeric_gradient(loss, px)), kFdTolerance);
  }
}

TEST(ImageEncoder, WrongInputsAreErrors) {
  Rng rng(5);
  const ImageEncoder enc(small_config(), rng);
  EXPECT_THROW(enc.forward(Matrix::Zero(3, 63), Vector::Zero(6)), Error);
  EXPECT_THROW(enc.forward(Matrix::Zero(3, 64), Vector::Zero(5)), Error);
}

TEST(Discriminator, ConfidenceRangeAndZeroWeights) {
  Rng rng(6);
  Discriminator disc(small_config(), rng);
  for (int i = 0; i < 100; ++i) {
    const double c = disc.confidence(random_vector(rng, 5, 3.0));
    EXPECT_GT(c, 0.0);
    EXPECT_LT(c, 1.0);
  }
  for (auto* p : disc.params()) p->value.setZero();
  for (int i = 0; i < 10; ++i) EXPECT_EQ(disc.confidence(random_vector(rng, 5)), 0.5);
  EXPECT_THROW(disc.score(Vector::Zero(4)), Error);
}

TEST(Discriminator, InputAndParameterGradients) {
  for (std::uint64_t seed = 30; seed < 35; ++seed) {
    Rng rng(seed);
    Discriminator disc(small_config(), rng);
    Vector x = random_vector(rng, 5);
    auto score = [&] { return disc.score(x); };
    DiscTrace tr;
    disc.score(x, &tr);
    EXPECT_LT(relative_error(disc.input_gradient(tr), numeric_gradient(score, x)), kFdTolerance);

    const double scale = 0.7;
    Vector dx;
    const double err = worst_param_error(
        disc.params(),
        [&] {
          DiscTrace t;
          disc.score(x, &t);
          dx = disc.backward(t, scale);
          return scale * score();
        },
        [&] { return scale * score(); });
    EXPECT_LT(err, kFdTolerance);
    EXPECT_LT(relative_error(dx, scale * disc.input_gradient(tr)), 1e-12);
  }
}

TEST(Discriminator, GradientPenaltyBackwardMatchesFiniteDifferences) {
  for (std::uint64_t seed = 40; seed < 45; ++seed) {
    Rng rng(seed);
    Discriminator disc(small_config(), rng);
    const Vector x = random_vector(rng, 5);
    const Vector G = random_vector(rng, 5);
    auto objective = [&] {
      DiscTrace t;
      disc.score(x, &t);
      return G.dot(disc.input_gradient(t));
    };
    const double err = worst_param_error(
        disc.params(),
        [&] {
          DiscTrace t;
          disc.score(x, &t);
          disc.input_gradient_backward(t, G);
          return objective();
        },
        objective);
    EXPECT_LT(err, kFdTolerance);
  }
}

}  // namespace
}  // namespace seje::encoders
