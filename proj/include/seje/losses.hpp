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

#include <optional>
#include <string>
#include <vector>

#include "seje/encoders.hpp"
#include "seje/rng.hpp"

namespace seje::losses {

struct LossConfig {
  double lambda1 = 0.005;
  double lambda2 = 0.005;
  double gamma = 16.0;
  double margin = 0.0;
  double lambda_d = 10.0;
  /// Hinge margin of the batch-all baseline.
  double batch_all_margin = 0.3;
  /// Recipes as the high-confidence discriminator class.
  bool eq4_as_printed = false;

  void validate() const;
};

/// Row i of both matrices is the i-th matched pair.
struct EmbeddingBatch {
  Matrix recipes;  // N x d
  Matrix images;   // N x d
  std::vector<int> categories;

  Index size() const { return recipes.rows(); }
};

/// Value with gradients with respect to both embedding matrices.
struct BatchLoss {
  double value = 0.0;
  Matrix grad_recipes;
  Matrix grad_images;
};

struct LossBundle {
  double tri = 0.0;
  double ca = 0.0;
  double ca_r = 0.0;
  double ca_v = 0.0;
  double da = 0.0;
  double d = 0.0;
  double total = 0.0;
};

/// Smoothed Euclidean distance sqrt(|a - b|^2 + kDistanceEps).
inline constexpr double kDistanceEps = 1e-12;

Matrix pairwise_distances(const Matrix& a, const Matrix& b);

/// argmin_j over j != anchor with categories[j] != categories[anchor]; lowest
/// index on ties. `same_category_allowed` drops the category constraint.
std::optional<Index> select_hard_negative(const Vector& dist_row, const std::vector<int>& categories, Index anchor,
                                          bool same_category_allowed = false);

enum class TripletMode {
  kBatchHard,                ///< nearest negative of a different category
  kBatchHardNearestOnly,     ///< nearest negative, any category
  kBatchAll,                 ///< hinge averaged over every negative
};

/// Sum over recipe anchors and image anchors of
/// softplus(gamma * (d(a, p) - d(a, n) + m)).
BatchLoss triplet_loss(const EmbeddingBatch& batch, const LossConfig& config,
                       TripletMode mode = TripletMode::kBatchHard);

struct CategoryLoss {
  double ca = 0.0;
  double ca_r = 0.0;
  double ca_v = 0.0;
  Matrix grad_recipe_logits;
  Matrix grad_image_logits;
};

/// Softmax cross-entropy per modality, summed over rows.
CategoryLoss category_alignment_loss(const Matrix& recipe_logits, const Matrix& image_logits,
                                     const std::vector<int>& labels);

struct DiscriminatorLoss {
  double value = 0.0;
  double adversarial = 0.0;
  double penalty = 0.0;
};

/// -sum[ln F(v_i) + ln(1 - F(r_i))] + lambda_d * sum (|grad_x s(x_i)| - 1)^2 with
/// x_i = eps_i r_i + (1 - eps_i) v_i. Accumulates discriminator gradients when
/// `accumulate`.
DiscriminatorLoss discriminator_loss(encoders::Discriminator& disc, const Matrix& recipes, const Matrix& images,
                                     const LossConfig& config, Rng& noise, bool accumulate);

/// sum ln(1 - F(r_i)); gradient is with respect to the recipe embeddings only.
BatchLoss discriminator_alignment_loss(const encoders::Discriminator& disc, const Matrix& recipes);

/// L = L_TRI + lambda1 L_CA + lambda2 L_DA; L_D is carried along unchanged.
LossBundle total_loss(double tri, double ca_r, double ca_v, double da, double d, const LossConfig& config);

/// {"step":..,"L_TRI":..,"L_CA_R":..,"L_CA_V":..,"L_DA":..,"L_D":..,"L_total":..}
std::string loss_record(std::int64_t step, const LossBundle& bundle);

}  // namespace seje::losses
