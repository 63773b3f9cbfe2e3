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

#include <map>
#include <string>
#include <vector>

#include "seje/common.hpp"

namespace seje::eval {

enum class Direction { kImageToRecipe, kRecipeToImage };
std::string to_string(Direction d);

/// Candidate indices by ascending Euclidean distance; ties by lower index.
std::vector<Index> rank(const Vector& query, const Matrix& candidates);

/// 1-based position of candidate `truth` in rank(query, candidates).
Index rank_of(const Vector& query, const Matrix& candidates, Index truth);

struct DirectionMetrics {
  double medr = 0.0;
  std::map<int, double> recall;  // K -> percentage
};

struct SubsetMetrics {
  DirectionMetrics image_to_recipe;
  DirectionMetrics recipe_to_image;
};

/// Median of 1-based ranks (mean of the middle two for even counts).
double median_rank(std::vector<Index> ranks);

/// Row i of both matrices is a matched pair.
SubsetMetrics evaluate_subset(const Matrix& recipe_embs, const Matrix& image_embs, const std::vector<int>& ks = {1, 5, 10});

struct RetrievalReport {
  Direction direction = Direction::kImageToRecipe;
  int subset_size = 0;
  int trials = 0;
  std::vector<double> medr;
  std::map<int, std::vector<double>> recall;
  double mean_medr = 0.0;
  double median_medr = 0.0;
  std::map<int, double> mean_recall;
  std::map<int, double> median_recall;

  std::string to_json() const;
};

struct ProtocolReport {
  RetrievalReport image_to_recipe;
  RetrievalReport recipe_to_image;

  std::string to_json() const;
};

/// `trials` distinct index subsets of size `subset_size` drawn without
/// replacement; re-drawn on collision while distinct subsets remain.
ProtocolReport evaluate_protocol(const Matrix& recipe_embs, const Matrix& image_embs, int subset_size, int trials,
                                 std::uint64_t seed, const std::vector<int>& ks = {1, 5, 10});

}  // namespace seje::eval
