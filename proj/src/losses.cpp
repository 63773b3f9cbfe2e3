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

#include "seje/losses.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <json.hpp>

namespace seje::losses {

namespace {

constexpr double kConfidenceFloor = 1e-7;

struct Clamped {
  double log_value;
  double dlog_dscore;
};

// ln(F) or ln(1 - F) of F = sigmoid(score), with F clamped away from 0 and 1.
// The derivative is zero where the clamp is active.
Clamped clamped_log(double score, bool complement, int& clamp_count) {
  const double f = nn::sigmoid(score);
  const double p = complement ? 1.0 - f : f;
  if (p < kConfidenceFloor) {
    ++clamp_count;
    return {std::log(kConfidenceFloor), 0.0};
  }
  if (p > 1.0 - kConfidenceFloor) {
    ++clamp_count;
    return {std::log(1.0 - kConfidenceFloor), 0.0};
  }
  return {std::log(p), complement ? -f : 1.0 - f};
}

void report_clamps(int count, const char* where) {
  if (count > 0) spdlog::debug("{}: {} confidences clamped to [1e-7, 1-1e-7]", where, count);
}

}  // namespace

void LossConfig::validate() const {
  if (!(gamma > 0)) throw ConfigError("gamma must be positive");
  if (!(lambda_d >= 0)) throw ConfigError("lambda_d must be non-negative");
  if (!(lambda1 >= 0) || !(lambda2 >= 0)) throw ConfigError("lambda1 and lambda2 must be non-negative");
}

Matrix pairwise_distances(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw Error("pairwise_distances: embedding dimensions differ");
  Matrix out(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.rows(); ++j) out(i, j) = std::sqrt((a.row(i) - b.row(j)).squaredNorm() + kDistanceEps);
  return out;
}

std::optional<Index> select_hard_negative(const Vector& dist_row, const std::vector<int>& categories, Index anchor,
                                          bool same_category_allowed) {
  std::optional<Index> best;
  for (Index j = 0; j < dist_row.size(); ++j) {
    if (j == anchor) continue;
    if (!same_category_allowed && categories[static_cast<std::size_t>(j)] == categories[static_cast<std::size_t>(anchor)])
      continue;
    if (!best || dist_row[j] < dist_row[*best]) best = j;
  }
  return best;
}

BatchLoss triplet_loss(const EmbeddingBatch& batch, const LossConfig& config, TripletMode mode) {
  const Index n = batch.size();
  if (n < 2) throw Error("triplet_loss needs at least 2 pairs");
  if (batch.images.rows() != n || static_cast<Index>(batch.categories.size()) != n)
    throw Error("triplet_loss: batch sizes differ");
  const Matrix dist = pairwise_distances(batch.recipes, batch.images);
  BatchLoss out{0.0, Matrix::Zero(n, batch.recipes.cols()), Matrix::Zero(n, batch.images.cols())};

  // dist(r, v) accumulates into both rows; `anchor_is_recipe` orients the pair.
  auto add_distance_grad = [&](Index r, Index v, double coeff) {
    const Vector diff = (batch.recipes.row(r) - batch.images.row(v)).transpose();
    const Vector g = coeff * diff / dist(r, v);
    out.grad_recipes.row(r) += g.transpose();
    out.grad_images.row(v) -= g.transpose();
  };

  for (int direction = 0; direction < 2; ++direction) {
    const bool recipe_anchor = direction == 0;
    for (Index i = 0; i < n; ++i) {
      const Vector row = recipe_anchor ? Vector(dist.row(i).transpose()) : Vector(dist.col(i));
      const double d_ap = row[i];
      auto pair_of = [&](Index j) { return recipe_anchor ? std::pair{i, j} : std::pair{j, i}; };
      if (mode == TripletMode::kBatchAll) {
        int negatives = 0;
        for (Index j = 0; j < n; ++j)
          if (j != i) ++negatives;
        for (Index j = 0; j < n; ++j) {
          if (j == i) continue;
          const double h = config.batch_all_margin + d_ap - row[j];
          if (h <= 0) continue;
          out.value += h / negatives;
          add_distance_grad(i, i, 1.0 / negatives);
          const auto [r, v] = pair_of(j);
          add_distance_grad(r, v, -1.0 / negatives);
        }
        continue;
      }
      const auto neg = select_hard_negative(row, batch.categories, i, mode == TripletMode::kBatchHardNearestOnly);
      if (!neg) continue;
      const double z = config.gamma * (d_ap - row[*neg] + config.margin);
      out.value += nn::softplus(z);
      const double dz = config.gamma * nn::sigmoid(z);
      add_distance_grad(i, i, dz);
      const auto [r, v] = pair_of(*neg);
      add_distance_grad(r, v, -dz);
    }
  }
  return out;
}

CategoryLoss category_alignment_loss(const Matrix& recipe_logits, const Matrix& image_logits,
                                     const std::vector<int>& labels) {
  const Index n = recipe_logits.rows();
  if (image_logits.rows() != n || image_logits.cols() != recipe_logits.cols() ||
      static_cast<Index>(labels.size()) != n)
    throw Error("category_alignment_loss: shape mismatch");
  CategoryLoss out;
  out.grad_recipe_logits = Matrix::Zero(n, recipe_logits.cols());
  out.grad_image_logits = Matrix::Zero(n, image_logits.cols());
  auto side = [&](const Matrix& logits, Matrix& grad) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      const int y = labels[static_cast<std::size_t>(i)];
      if (y < 0 || y >= logits.cols()) throw Error("category label " + std::to_string(y) + " out of range");
      const Vector row = logits.row(i).transpose();
      const double m = row.maxCoeff();
      const double lse = m + std::log((row.array() - m).exp().sum());
      total += lse - row[y];
      Vector p = (row.array() - lse).exp();
      p[y] -= 1.0;
      grad.row(i) = p.transpose();
    }
    return total;
  };
  out.ca_r = side(recipe_logits, out.grad_recipe_logits);
  out.ca_v = side(image_logits, out.grad_image_logits);
  out.ca = out.ca_r + out.ca_v;
  return out;
}

DiscriminatorLoss discriminator_loss(encoders::Discriminator& disc, const Matrix& recipes, const Matrix& images,
                                     const LossConfig& config, Rng& noise, bool accumulate) {
  const Index n = recipes.rows();
  if (n < 1 || images.rows() != n) throw Error("discriminator_loss: empty or mismatched batch");
  DiscriminatorLoss out;
  int clamps = 0;
  // Prose convention: images are the high-confidence class.
  const Matrix& positive = config.eq4_as_printed ? recipes : images;
  const Matrix& negative = config.eq4_as_printed ? images : recipes;
  for (Index i = 0; i < n; ++i) {
    encoders::DiscTrace tp, tn;
    const Clamped lp = clamped_log(disc.score(positive.row(i).transpose(), &tp), false, clamps);
    const Clamped ln = clamped_log(disc.score(negative.row(i).transpose(), &tn), true, clamps);
    out.adversarial -= lp.log_value + ln.log_value;
    if (accumulate) {
      disc.backward(tp, -lp.dlog_dscore);
      disc.backward(tn, -ln.dlog_dscore);
    }
    const double eps = noise.uniform();
    if (config.lambda_d == 0.0) continue;
    const Vector x = eps * recipes.row(i).transpose() + (1.0 - eps) * images.row(i).transpose();
    encoders::DiscTrace tx;
    disc.score(x, &tx);
    const Vector g = disc.input_gradient(tx);
    const double norm = g.norm();
    out.penalty += (norm - 1.0) * (norm - 1.0);
    if (accumulate && norm > 0.0) disc.input_gradient_backward(tx, config.lambda_d * 2.0 * (norm - 1.0) / norm * g);
  }
  report_clamps(clamps, "discriminator_loss");
  out.value = out.adversarial + config.lambda_d * out.penalty;
  return out;
}

BatchLoss discriminator_alignment_loss(const encoders::Discriminator& disc, const Matrix& recipes) {
  BatchLoss out{0.0, Matrix::Zero(recipes.rows(), recipes.cols()), Matrix()};
  int clamps = 0;
  for (Index i = 0; i < recipes.rows(); ++i) {
    encoders::DiscTrace t;
    const Clamped c = clamped_log(disc.score(recipes.row(i).transpose(), &t), true, clamps);
    out.value += c.log_value;
    if (c.dlog_dscore != 0.0) out.grad_recipes.row(i) = c.dlog_dscore * disc.input_gradient(t).transpose();
  }
  report_clamps(clamps, "discriminator_alignment_loss");
  return out;
}

LossBundle total_loss(double tri, double ca_r, double ca_v, double da, double d, const LossConfig& config) {
  LossBundle b;
  b.tri = tri;
  b.ca_r = ca_r;
  b.ca_v = ca_v;
  b.ca = ca_r + ca_v;
  b.da = da;
  b.d = d;
  b.total = tri + config.lambda1 * b.ca + config.lambda2 * da;
  return b;
}

std::string loss_record(std::int64_t step, const LossBundle& b) {
  nlohmann::ordered_json j;
  j["step"] = step;
  j["L_TRI"] = b.tri;
  j["L_CA_R"] = b.ca_r;
  j["L_CA_V"] = b.ca_v;
  j["L_DA"] = b.da;
  j["L_D"] = b.d;
  j["L_total"] = b.total;
  return j.dump();
}

}  // namespace seje::losses
