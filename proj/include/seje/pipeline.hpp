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

#include <filesystem>
#include <string>
#include <vector>

#include "seje/config.hpp"
#include "seje/corpus.hpp"
#include "seje/image_sem.hpp"
#include "seje/term_extract.hpp"
#include "seje/term_rate.hpp"
#include "seje/text_sem.hpp"
#include "seje/trainer.hpp"

namespace seje::pipeline {

struct PreprocessConfig {
  double train_fraction = 0.7;
  double val_fraction = 0.1;
  std::uint64_t seed = 1;
  terms::ExtractorConfig extractor;
  textsem::CbowConfig cbow = {.epochs = 15};
  textsem::SentenceEncoderConfig sentence;
  imagesem::ClassifierConfig classifier;
  rating::RaterConfig rater;

  /// Propagates `seed` into every sub-config.
  void set_seed(std::uint64_t s);
  void apply(const KeyValueConfig& kv);
  void validate() const;
  static const std::vector<std::string>& keys();
};

struct SplitIds {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

/// Every Phase I model plus the rated key terms of each recipe.
struct PhaseOne {
  corpus::CategoryVocabulary categories;
  SplitIds split;
  terms::KeyTermExtractor extractor;
  std::vector<terms::KeyTermSet> key_terms;  // corpus order
  textsem::WordEmbeddingTable words;
  textsem::SentenceEncoder sentences;
  imagesem::CategoryClassifier classifier;

  static const std::vector<std::string>& artifact_files();
  void save(const std::filesystem::path& dir) const;
  static PhaseOne load(const std::filesystem::path& dir);
};

/// Trains every Phase I model on the training split; the entity vocabulary and
/// key terms cover the whole corpus.
PhaseOne preprocess(const corpus::Corpus& corpus, const PreprocessConfig& config);

/// Entity-joined full text of a recipe.
Tokens joined_text(const corpus::Recipe& recipe, const std::set<std::string>& entity_vocabulary);

/// Rated key terms for one recipe.
terms::KeyTermSet rate_key_terms(terms::KeyTermSet set, const Tokens& joined, const rating::RaterConfig& config,
                                 const rating::TfidfModel& tfidf, const textsem::WordEmbeddingTable& words);

/// Phase II inputs of `pairs` under the Phase I models.
std::vector<trainer::PreparedPair> prepare_pairs(const std::vector<corpus::RecipePair>& pairs, const PhaseOne& phase_one);

struct PreparedSplit {
  std::vector<trainer::PreparedPair> train;
  std::vector<trainer::PreparedPair> val;
  std::vector<trainer::PreparedPair> test;
};

PreparedSplit prepare_split(const corpus::Corpus& corpus, const PhaseOne& phase_one);

}  // namespace seje::pipeline
