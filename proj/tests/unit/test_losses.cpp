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

#include <cmath>

#include "json.hpp"
#include "oracles.hpp"
#include "seje/losses.hpp"

namespace seje::losses {
namespace {

using seje::testing::enumeration_triplet;
using seje::testing::kFdTolerance;
using seje::testing::loop_distance;
using seje::testing::numeric_gradient;
using seje::testing::random_labels;
using seje::testing::random_matrix;
using seje::testing::relative_error;
using seje::testing::worst_param_error;

EmbeddingBatch random_batch(Rng& rng, Index n, Index d, int classes) {
  return {random_matrix(rng, n, d), random_matrix(rng, n, d), random_labels(rng, static_cast<std::size_t>(n), classes)};
}

encoders::JointConfig disc_config(int d) {
  encoders::JointConfig c;
  c.d = d;
  c.disc_hidden = 6;
  return c;
}

TEST(Distances, Examples) {
  const Matrix eye = Matrix::Identity(3, 3);
  const Matrix d = pairwise_distances(eye, eye);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(d(i, i), 0.0, 1e-5);
  Matrix a(1, 2), b(1, 2);
  a << 0, 0;
  b << 3, 4;
  EXPECT_NEAR(pairwise_distances(a, b)(0, 0), 5.0, 1e-12);
  EXPECT_THROW(pairwise_distances(Matrix::Zero(2, 3), Matrix::Zero(2, 4)), Error);
}

TEST(Distances, MatchLoopOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(rng, 8, 5), b = random_matrix(rng, 8, 5);
    const Matrix d = pairwise_distances(a, b);
    for (Index i = 0; i < 8; ++i)
      for (Index j = 0; j < 8; ++j) EXPECT_NEAR(d(i, j), loop_distance(a, i, b, j), 1e-12);
  }
}

TEST(HardNegative, Examples) {
  Vector row(4);
  row << 0.5, 0.1, 0.3, 0.9;
  EXPECT_EQ(select_hard_negative(row, {0, 0, 1, 2}, 0), Index{2});
  EXPECT_EQ(select_hard_negative(row, {0, 1, 2, 3}, 0), Index{1});
  EXPECT_FALSE(select_hard_negative(row, {4, 4, 4, 4}, 0).has_value());
  EXPECT_EQ(select_hard_negative(row, {4, 4, 4, 4}, 0, true), Index{1});
  Vector ties(3);
  ties << 0.0, 0.2, 0.2;
  EXPECT_EQ(select_hard_negative(ties, {0, 1, 1}, 0), Index{1});
}

TEST(HardNegative, NeverReturnsSameCategoryWhenAnAlternativeExists) {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(7));
    const Vector row = random_matrix(rng, n, 1);
    const auto cats = random_labels(rng, static_cast<std::size_t>(n), 3);
    const Index anchor = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    const auto pick = select_hard_negative(row, cats, anchor);
    std::optional<Index> oracle;
    for (Index j = 0; j < n; ++j)
      if (j != anchor && cats[static_cast<std::size_t>(j)] != cats[static_cast<std::size_t>(anchor)] &&
          (!oracle || row[j] < row[*oracle]))
        oracle = j;
    EXPECT_EQ(pick, oracle);
  }
}

TEST(Triplet, EqualDistancesGiveTwoNLogTwo) {
  const Index n = 4;
  EmbeddingBatch b{Matrix::Zero(n, 3), Matrix::Ones(n, 3), {0, 1, 2, 3}};
  EXPECT_NEAR(triplet_loss(b, LossConfig{}).value, 2.0 * n * std::log(2.0), 1e-9);
}

TEST(Triplet, SeparatedBatchHasTinyLoss) {
  Matrix p(2, 1);
  p << 0.0, 1.25;
  EmbeddingBatch b{p, p, {0, 1}};
  const double v = triplet_loss(b, LossConfig{}).value;
  EXPECT_GE(v, 0.0);
  EXPECT_LT(v, 4 * 1e-8);
}

TEST(Triplet, MatchesEnumerationOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(7));
    const EmbeddingBatch b = random_batch(rng, n, 4, 1 + static_cast<int>(rng.below(4)));
    LossConfig cfg;
    cfg.margin = trial % 2 ? 0.2 : 0.0;
    const double oracle = enumeration_triplet(b.recipes, b.images, b.categories, cfg.gamma, cfg.margin, kDistanceEps);
    EXPECT_NEAR(triplet_loss(b, cfg).value, oracle, 1e-9);
  }
}

TEST(Triplet, SingletonBatchIsAnError) {
  EmbeddingBatch b{Matrix::Zero(1, 2), Matrix::Zero(1, 2), {0}};
  EXPECT_THROW(triplet_loss(b, LossConfig{}), Error);
}

TEST(Triplet, NonNegativeTranslationInvariantAndMarginMonotone) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    EmbeddingBatch b = random_batch(rng, 6, 3, 3);
    LossConfig cfg;
    cfg.gamma = 2.0;
    const double base = triplet_loss(b, cfg).value;
    EXPECT_GE(base, 0.0);
    const Vector shift = random_matrix(rng, 3, 1, 5.0);
    EmbeddingBatch moved = b;
    moved.recipes.rowwise() += shift.transpose();
    moved.images.rowwise() += shift.transpose();
    EXPECT_NEAR(triplet_loss(moved, cfg).value, base, 1e-9 * std::max(1.0, base));
    // a larger margin is a uniform increase of every d(a, p)
    LossConfig wider = cfg;
    wider.margin = 0.1 + rng.uniform();
    EXPECT_GE(triplet_loss(b, wider).value, base);
  }
}

TEST(Triplet, GradientsMatchFiniteDifferences) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    EmbeddingBatch b = random_batch(rng, 6, 4, 3);
    LossConfig cfg;
    cfg.gamma = 2.0;
    for (TripletMode mode : {TripletMode::kBatchHard, TripletMode::kBatchHardNearestOnly, TripletMode::kBatchAll}) {
      const BatchLoss l = triplet_loss(b, cfg, mode);
      auto f = [&] { return triplet_loss(b, cfg, mode).value; };
      EXPECT_LT(relative_error(l.grad_recipes, numeric_gradient(f, b.recipes)), kFdTolerance);
      EXPECT_LT(relative_error(l.grad_images, numeric_gradient(f, b.images)), kFdTolerance);
    }
  }
}

TEST(Triplet, BatchAllIsAveragedHinge) {
  Matrix r(2, 1), v(2, 1);
  r << 0.0, 1.0;
  v << 0.5, 0.8;
  LossConfig cfg;
  cfg.batch_all_margin = 0.3;
  const EmbeddingBatch b{r, v, {0, 1}};
  // anchors: r0 (0.5 vs 0.8), r1 (0.2 vs 0.5), v0 (0.5 vs 0.5), v1 (0.2 vs 0.8)
  const double expect = std::max(0.0, 0.5 - 0.8 + 0.3) + std::max(0.0, 0.2 - 0.5 + 0.3) +
                        std::max(0.0, 0.5 - 0.5 + 0.3) + std::max(0.0, 0.2 - 0.8 + 0.3);
  EXPECT_NEAR(triplet_loss(b, cfg, TripletMode::kBatchAll).value, expect, 1e-6);
}

TEST(CategoryAlignment, Examples) {
  const Index n = 5, c = 4;
  const std::vector<int> labels{0, 1, 2, 3, 0};
  const CategoryLoss u = category_alignment_loss(Matrix::Zero(n, c), Matrix::Zero(n, c), labels);
  EXPECT_NEAR(u.ca_r, n * std::log(4.0), 1e-12);
  EXPECT_NEAR(u.ca, u.ca_r + u.ca_v, 1e-15);
  Matrix sure = Matrix::Zero(n, c);
  for (Index i = 0; i < n; ++i) sure(i, labels[static_cast<std::size_t>(i)]) = 1000.0;
  EXPECT_NEAR(category_alignment_loss(sure, sure, labels).ca, 0.0, 1e-12);
  EXPECT_THROW(category_alignment_loss(Matrix::Zero(n, c), Matrix::Zero(n, c), {0, 1, 2, 4, 0}), Error);
}

TEST(CategoryAlignment, MatchesLoopOracleAndGradients) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix lr = random_matrix(rng, 4, 6, 2.0), lv = random_matrix(rng, 4, 6, 2.0);
    const auto labels = random_labels(rng, 4, 6);
    auto ce = [&](const Matrix& l) {
      double total = 0;
      for (Index i = 0; i < 4; ++i) {
        double z = 0;
        for (Index k = 0; k < 6; ++k) z += std::exp(l(i, k));
        for (Index k = 0; k < 6; ++k) {
          const double y = k == labels[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
          total -= y * std::log(std::exp(l(i, k)) / z);
        }
      }
      return total;
    };
    const CategoryLoss out = category_alignment_loss(lr, lv, labels);
    EXPECT_NEAR(out.ca_r, ce(lr), 1e-9);
    EXPECT_NEAR(out.ca_v, ce(lv), 1e-9);
    auto f = [&] { return category_alignment_loss(lr, lv, labels).ca; };
    EXPECT_LT(relative_error(out.grad_recipe_logits, numeric_gradient(f, lr)), kFdTolerance);
    EXPECT_LT(relative_error(out.grad_image_logits, numeric_gradient(f, lv)), kFdTolerance);
  }
}

/// score(x) = relu(w.x) - relu(-w.x) = w.x through the three-layer network.
encoders::Discriminator linear_discriminator(const Vector& w) {
  Rng rng(0);
  encoders::Discriminator disc(disc_config(static_cast<int>(w.size())), rng);
  for (auto* p : disc.params()) p->value.setZero();
  disc.l1_.weight.value.row(0) = w.transpose();
  disc.l1_.weight.value.row(1) = -w.transpose();
  disc.l2_.weight.value(0, 0) = 1.0;
  disc.l2_.weight.value(1, 1) = 1.0;
  disc.l3_.weight.value(0, 0) = 1.0;
  disc.l3_.weight.value(0, 1) = -1.0;
  return disc;
}

TEST(Discriminator, HalfConfidenceWithoutPenalty) {
  Rng rng(7);
  encoders::Discriminator disc(disc_config(4), rng);
  for (auto* p : disc.params()) p->value.setZero();
  LossConfig cfg;
  cfg.lambda_d = 0.0;
  Rng noise(1);
  const Index n = 5;
  const auto l = discriminator_loss(disc, random_matrix(rng, n, 4), random_matrix(rng, n, 4), cfg, noise, false);
  EXPECT_NEAR(l.value, 2.0 * n * std::log(2.0), 1e-12);
}

TEST(Discriminator, UnitGradientHasNoPenalty) {
  Rng rng(8);
  Vector w = random_matrix(rng, 4, 1);
  w.normalize();
  encoders::Discriminator disc = linear_discriminator(w);
  Rng noise(2);
  const auto l = discriminator_loss(disc, random_matrix(rng, 6, 4), random_matrix(rng, 6, 4), LossConfig{}, noise, false);
  EXPECT_NEAR(l.penalty, 0.0, 1e-20);
  EXPECT_NEAR(l.value, l.adversarial, 1e-12);
}

TEST(Discriminator, PenaltyMatchesFiniteDifferenceNorm) {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    encoders::Discriminator disc(disc_config(4), rng);
    const Matrix r = random_matrix(rng, 5, 4), v = random_matrix(rng, 5, 4);
    Rng noise(100 + static_cast<std::uint64_t>(trial));
    Rng replay = noise;
    const auto l = discriminator_loss(disc, r, v, LossConfig{}, noise, false);
    double oracle = 0.0;
    for (Index i = 0; i < 5; ++i) {
      const double eps = replay.uniform();
      Vector x = eps * r.row(i).transpose() + (1 - eps) * v.row(i).transpose();
      const Vector g = numeric_gradient([&] { return disc.score(x); }, x);
      oracle += (g.norm() - 1.0) * (g.norm() - 1.0);
    }
    EXPECT_NEAR(l.penalty, oracle, 1e-3 * std::max(1.0, oracle));
  }
}

TEST(Discriminator, ParameterGradientsMatchFiniteDifferences) {
  Rng rng(10);
  int skipped = 0;
  for (int trial = 0; trial < 10; ++trial) {
    encoders::Discriminator disc(disc_config(4), rng);
    const Matrix r = random_matrix(rng, 5, 4), v = random_matrix(rng, 5, 4);
    if (seje::testing::relu_margin(disc, seje::testing::discriminator_points(r, v, Rng(55))) < 1e-3) {
      ++skipped;
      continue;
    }
    for (bool printed : {false, true}) {
      LossConfig cfg;
      cfg.eq4_as_printed = printed;
      auto value = [&] {
        Rng noise(55);
        return discriminator_loss(disc, r, v, cfg, noise, false).value;
      };
      const double err = worst_param_error(
          disc.params(),
          [&] {
            Rng noise(55);
            return discriminator_loss(disc, r, v, cfg, noise, true).value;
          },
          value);
      EXPECT_LT(err, kFdTolerance);
    }
  }
  EXPECT_LE(skipped, 3);
}

TEST(Discriminator, PrintedConventionSwapsModalities) {
  Rng rng(11);
  encoders::Discriminator disc(disc_config(4), rng);
  const Matrix r = random_matrix(rng, 5, 4), v = random_matrix(rng, 5, 4);
  LossConfig prose, printed;
  prose.lambda_d = printed.lambda_d = 0.0;
  printed.eq4_as_printed = true;
  Rng n1(1), n2(1);
  EXPECT_NEAR(discriminator_loss(disc, r, v, printed, n1, false).value,
              discriminator_loss(disc, v, r, prose, n2, false).value, 1e-12);
}

TEST(Alignment, HalfConfidenceAndClamp) {
  Rng rng(12);
  encoders::Discriminator disc(disc_config(4), rng);
  for (auto* p : disc.params()) p->value.setZero();
  const Matrix r = random_matrix(rng, 6, 4);
  EXPECT_NEAR(discriminator_alignment_loss(disc, r).value, -6.0 * std::log(2.0), 1e-12);
  disc.l3_.bias.value(0, 0) = 100.0;
  const BatchLoss sat = discriminator_alignment_loss(disc, r);
  EXPECT_NEAR(sat.value, 6.0 * std::log(1e-7), 1e-6);
  EXPECT_EQ(sat.grad_recipes, Matrix::Zero(6, 4));
}

TEST(Alignment, GradientsMatchFiniteDifferences) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    encoders::Discriminator disc(disc_config(4), rng);
    Matrix r = random_matrix(rng, 5, 4);
    const BatchLoss l = discriminator_alignment_loss(disc, r);
    const auto before = nn::snapshot(disc.params());
    EXPECT_LT(relative_error(l.grad_recipes, numeric_gradient([&] { return discriminator_alignment_loss(disc, r).value; }, r)),
              kFdTolerance);
    for (auto* p : disc.params()) EXPECT_EQ(p->grad, Matrix::Zero(p->grad.rows(), p->grad.cols()));
    EXPECT_EQ(nn::snapshot(disc.params()), before);
  }
}

TEST(Total, Composition) {
  LossConfig zero;
  zero.lambda1 = zero.lambda2 = 0.0;
  EXPECT_EQ(total_loss(1.5, 2.0, 3.0, 4.0, 5.0, zero).total, 1.5);
  const LossBundle b = total_loss(1.0, 0.5, 1.5, 3.0, 7.0, LossConfig{});
  EXPECT_NEAR(b.total, 1.025, 1e-12);
  EXPECT_EQ(b.ca, 2.0);
  EXPECT_EQ(b.d, 7.0);
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    LossConfig c;
    c.lambda1 = rng.uniform();
    c.lambda2 = rng.uniform();
    const double tri = rng.uniform() * 10, cr = rng.uniform(), cv = rng.uniform(), da = -rng.uniform() * 5;
    const LossBundle x = total_loss(tri, cr, cv, da, 0.0, c);
    EXPECT_NEAR(x.total, x.tri + c.lambda1 * x.ca + c.lambda2 * x.da, 1e-9);
  }
}

TEST(Total, RecomputationIsBitIdentical) {
  Rng rng(15);
  const EmbeddingBatch b = random_batch(rng, 8, 4, 3);
  const double a = triplet_loss(b, LossConfig{}).value;
  const EmbeddingBatch copy = b;
  EXPECT_EQ(triplet_loss(copy, LossConfig{}).value, a);
}

TEST(Record, KeysInOrder) {
  const LossBundle b = total_loss(1.0, 0.5, 1.5, 3.0, 7.0, LossConfig{});
  const auto j = nlohmann::ordered_json::parse(loss_record(42, b));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"step", "L_TRI", "L_CA_R", "L_CA_V", "L_DA", "L_D", "L_total"}));
  EXPECT_EQ(j["step"], 42);
  EXPECT_EQ(j["L_total"].get<double>(), b.total);
}

TEST(Config, Validation) {
  LossConfig c;
  c.gamma = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = LossConfig{};
  c.lambda_d = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

}  // namespace
}  // namespace seje::losses
