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
#include "seje/nn.hpp"

namespace seje::nn {
namespace {

using seje::testing::kFdTolerance;
using seje::testing::numeric_gradient;
using seje::testing::random_matrix;
using seje::testing::random_vector;
using seje::testing::relative_error;
using seje::testing::worst_param_error;

TEST(Activations, SoftmaxSumsToOneAndIsShiftInvariant) {
  Vector z(4);
  z << 1000.0, 1001.0, 999.0, -5.0;
  const Vector p = softmax(z);
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
  EXPECT_NEAR((p - softmax((z.array() - 7.0).matrix())).norm(), 0.0, 1e-12);
}

TEST(Activations, ArgmaxTiesGoToLowestIndex) {
  Vector v(4);
  v << 0.1, 0.7, 0.7, 0.2;
  EXPECT_EQ(argmax(v), 1);
}

TEST(Activations, SoftplusIsStable) {
  EXPECT_NEAR(softplus(0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(softplus(800.0), 800.0, 1e-12);
  EXPECT_GT(softplus(-800.0), 0.0 - 1e-300);
  EXPECT_NEAR(softplus(-20.0), std::log1p(std::exp(-20.0)), 1e-20);
}

TEST(Linear, GradientsMatchFiniteDifferences) {
  Rng rng(1);
  Linear l("l", 5, 3, rng);
  Vector x = random_vector(rng, 5);
  const Vector w = random_vector(rng, 3);
  auto loss = [&] { return w.dot(l.forward(x)); };
  const double err = worst_param_error(
      l.params(),
      [&] {
        l.backward(x, w);
        return loss();
      },
      loss);
  EXPECT_LT(err, kFdTolerance);
  const Vector dx = l.input_grad(w);
  EXPECT_LT(relative_error(dx, numeric_gradient(loss, x)), kFdTolerance);
}

TEST(Lstm, GradientsMatchFiniteDifferences) {
  Rng rng(2);
  Lstm lstm("lstm", 3, 4, rng);
  std::vector<Vector> xs;
  for (int t = 0; t < 5; ++t) xs.push_back(random_vector(rng, 3));
  Vector h0 = random_vector(rng, 4, 0.5), c0 = random_vector(rng, 4, 0.5);
  std::vector<Vector> weights;
  for (int t = 0; t < 5; ++t) weights.push_back(random_vector(rng, 4));
  auto loss = [&] {
    const LstmTrace tr = lstm.forward(xs, h0, c0);
    double s = 0;
    for (int t = 0; t < 5; ++t) s += weights[static_cast<std::size_t>(t)].dot(tr.hidden[static_cast<std::size_t>(t)]);
    return s;
  };
  LstmGrads g;
  const double err = worst_param_error(
      lstm.params(),
      [&] {
        g = lstm.backward(lstm.forward(xs, h0, c0), weights);
        return loss();
      },
      loss);
  EXPECT_LT(err, kFdTolerance);
  for (int t = 0; t < 5; ++t)
    EXPECT_LT(relative_error(g.inputs[static_cast<std::size_t>(t)], numeric_gradient(loss, xs[static_cast<std::size_t>(t)])),
              kFdTolerance);
  EXPECT_LT(relative_error(g.h0, numeric_gradient(loss, h0)), kFdTolerance);
  EXPECT_LT(relative_error(g.c0, numeric_gradient(loss, c0)), kFdTolerance);
}

TEST(Lstm, ForgetBiasIsShiftedByOne) {
  Rng rng(3);
  Lstm lstm("lstm", 2, 3, rng);
  const double bound = 1.0 / std::sqrt(3.0);
  for (Index k = 3; k < 6; ++k) EXPECT_NEAR(lstm.bias.value(k, 0), 1.0, bound);
}

TEST(Conv2d, OutputShapeAndGradients) {
  Rng rng(4);
  Conv2d conv("c", 2, 3, 3, 2, 1, rng);
  const Shape2d in{2, 6, 5};
  const Shape2d out = conv.output_shape(in);
  EXPECT_EQ(out.channels, 3);
  EXPECT_EQ(out.height, 3);
  EXPECT_EQ(out.width, 3);
  Matrix x = random_matrix(rng, 2, 30);
  const Matrix w = random_matrix(rng, 3, 9);
  auto loss = [&] { return (conv.forward(x, in, nullptr).array() * w.array()).sum(); };
  Matrix dx;
  const double err = worst_param_error(
      conv.params(),
      [&] {
        Matrix cols;
        conv.forward(x, in, &cols);
        dx = conv.backward(cols, w, in);
        return loss();
      },
      loss);
  EXPECT_LT(err, kFdTolerance);
  EXPECT_LT(relative_error(dx, numeric_gradient(loss, x)), kFdTolerance);
}

TEST(Conv2d, MatchesDirectConvolutionLoop) {
  Rng rng(5);
  Conv2d conv("c", 2, 2, 3, 1, 1, rng);
  const Shape2d in{2, 4, 4};
  const Matrix x = random_matrix(rng, 2, 16);
  const Matrix y = conv.forward(x, in, nullptr);
  for (int o = 0; o < 2; ++o)
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        double s = conv.bias.value(o, 0);
        for (int ch = 0; ch < 2; ++ch)
          for (int kr = 0; kr < 3; ++kr)
            for (int kc = 0; kc < 3; ++kc) {
              const int rr = r + kr - 1, cc = c + kc - 1;
              if (rr < 0 || rr >= 4 || cc < 0 || cc >= 4) continue;
              s += conv.weight.value(o, ch * 9 + kr * 3 + kc) * x(ch, rr * 4 + cc);
            }
        EXPECT_NEAR(y(o, r * 4 + c), s, 1e-12);
      }
}

TEST(ConvBackbone, FeatureSizeAndGradients) {
  Rng rng(6);
  ConvBackbone net("net", Shape2d{3, 8, 8}, {2, 3, 4}, rng);
  EXPECT_EQ(net.feature_size(), 4 * 1 * 1);
  Matrix img = random_matrix(rng, 3, 64);
  const Vector w = random_vector(rng, net.feature_size());
  auto loss = [&] { return w.dot(net.forward(img, nullptr)); };
  Matrix dimg;
  const double err = worst_param_error(
      net.params(),
      [&] {
        ConvTrace tr;
        net.forward(img, &tr);
        dimg = net.backward(tr, w);
        return loss();
      },
      loss);
  EXPECT_LT(err, kFdTolerance);
  EXPECT_LT(relative_error(dimg, numeric_gradient(loss, img)), kFdTolerance);
}

}  // namespace
}  // namespace seje::nn
