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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seje/common.hpp"
#include "seje/text.hpp"

namespace seje::corpus {

/// A recipe: title, ingredient lines and instruction sentences, all tokenised.
struct Recipe {
  std::string id;
  Tokens title;
  std::vector<Tokens> ingredient_lines;
  std::vector<Tokens> instructions;
  std::string category;

  bool operator==(const Recipe&) const = default;

  /// title + ingredient lines + instructions, in that order.
  Tokens full_text() const;
};

/// RGB raster stored channel-major: pixels(c, y * width + x), values in [0, 1].
struct FoodImage {
  std::string id;
  int height = 0;
  int width = 0;
  Matrix pixels;
  std::string category;

  bool operator==(const FoodImage& o) const;
};

/// Ground-truth ingredient entity: tokens [begin, end) of ingredient line `line`.
struct IngredientSpan {
  int line = 0;
  int begin = 0;
  int end = 0;

  bool operator==(const IngredientSpan&) const = default;
};

struct RecipePair {
  Recipe recipe;
  FoodImage image;
  std::vector<IngredientSpan> spans;

  const std::string& id() const { return recipe.id; }
  const std::string& category() const { return recipe.category; }
  /// Underscore-joined surfaces of the annotated ingredient entities.
  std::vector<std::string> ground_truth_ingredients() const;

  bool operator==(const RecipePair&) const = default;
};

class CategoryVocabulary {
 public:
  CategoryVocabulary() = default;
  explicit CategoryVocabulary(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  int count() const { return static_cast<int>(labels_.size()); }
  bool contains(const std::string& label) const { return index_.count(label) > 0; }
  /// Stable integer index of `label`; throws on unknown labels.
  int index(const std::string& label) const;
  const std::string& label(int index) const { return labels_.at(static_cast<std::size_t>(index)); }

  bool operator==(const CategoryVocabulary& o) const { return labels_ == o.labels_; }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, int> index_;
};

/// Per-category term signatures recorded by the generator.
struct CategorySignature {
  std::vector<std::string> ingredients;
  std::vector<std::string> utensils;
  std::vector<std::string> actions;

  bool operator==(const CategorySignature&) const = default;
};

struct Corpus {
  CategoryVocabulary categories;
  std::vector<RecipePair> pairs;
  int image_height = 32;
  int image_width = 32;
  /// Present for generated corpora; not persisted.
  std::map<std::string, CategorySignature> signatures;

  std::size_t size() const { return pairs.size(); }
  /// Equality over persisted content (signatures excluded).
  bool operator==(const Corpus& o) const;
};

struct GeneratorSpec {
  int num_categories = 10;
  int pairs_per_category = 50;
  int vocab_size = 200;
  std::uint64_t seed = 7;
  int ingredient_pool_size = 60;
  int utensil_pool_size = 20;
  int action_pool_size = 20;
  int image_size = 32;
  /// Probability that a recipe term is drawn from its category signature.
  double signature_rate = 0.85;
  double pixel_noise = 0.06;
};

/// Builds a deterministic synthetic corpus. Category ingredient signatures are
/// pairwise disjoint; images are category colour blocks plus one patch per
/// recipe ingredient plus noise.
Corpus generate_synthetic_corpus(const GeneratorSpec& spec);

void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus(const std::filesystem::path& path);

struct Split {
  std::vector<RecipePair> train;
  std::vector<RecipePair> val;
  std::vector<RecipePair> test;
};

/// Disjoint, exhaustive partition. Stratified by category when every category
/// has at least three pairs.
Split split(const Corpus& corpus, double train_frac, double val_frac, std::uint64_t seed);

}  // namespace seje::corpus
