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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "seje/adam.hpp"
#include "seje/checkpoint.hpp"
#include "seje/corpus.hpp"
#include "seje/nn.hpp"
#include "seje/text.hpp"

namespace seje::terms {

enum class SpanLabel { kUnlabeled, kTrue, kFalse };

/// A contiguous run of tokens of one ingredient line proposed by the tagger.
struct CandidateSpan {
  Tokens tokens;
  int source_line = 0;
  int begin = 0;
  double probability = 0.0;
  SpanLabel label = SpanLabel::kUnlabeled;

  std::string surface() const { return underscore_join(tokens); }
};

enum class TermKind { kIngredient, kUtensil, kAction };

std::string to_string(TermKind kind);
TermKind term_kind_from_string(const std::string& s);

struct KeyTerm {
  std::string surface;  // lowercase, multi-word joined by '_'
  TermKind kind = TermKind::kIngredient;
  double weight = 0.0;

  bool operator==(const KeyTerm&) const = default;
};

struct KeyTermSet {
  std::string recipe_id;
  std::vector<KeyTerm> terms;

  bool contains(const std::string& surface, TermKind kind) const;
  /// Adds the term unless (surface, kind) is already present.
  bool add(KeyTerm term);
  bool operator==(const KeyTermSet&) const = default;
};

void save_key_terms(const std::vector<KeyTermSet>& sets, const std::filesystem::path& path);
std::vector<KeyTermSet> load_key_terms(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

/// One ingredient line with per-token span membership (1 inside an entity).
struct AnnotatedLine {
  Tokens tokens;
  std::vector<int> inside;
};

/// Converts generator spans into per-token tagger supervision.
std::vector<AnnotatedLine> annotate_lines(const std::vector<corpus::RecipePair>& pairs);

struct TaggerConfig {
  int embedding_dim = 16;
  int hidden_size = 16;
  int epochs = 20;
  int batch_size = 8;
  double learning_rate = 0.01;
  std::uint64_t seed = 1;
};

/// Bidirectional LSTM mapping a token sequence to per-token probabilities of
/// belonging to an ingredient entity.
class SequenceTagger {
 public:
  SequenceTagger() = default;
  SequenceTagger(std::vector<std::string> vocabulary, const TaggerConfig& config);

  std::vector<double> predict(const Tokens& tokens) const;
  /// Summed binary cross-entropy; accumulates gradients when `accumulate`.
  double loss(const AnnotatedLine& line, bool accumulate);

  nn::ParamRefs params();
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }
  const TaggerConfig& config() const { return config_; }

  void save(Checkpoint& ckpt, const std::string& prefix) const;
  static SequenceTagger load(const Checkpoint& ckpt, const std::string& prefix);

 private:
  friend SequenceTagger train_ingredient_tagger(const std::vector<AnnotatedLine>&, const TaggerConfig&);

  Index token_id(const std::string& token) const;

  TaggerConfig config_;
  std::vector<std::string> vocabulary_;  // index 0 is the unknown token
  std::map<std::string, Index> index_;
  nn::Embedding embedding_;
  nn::Lstm forward_;
  nn::Lstm backward_;
  nn::Linear output_;
  std::vector<double> epoch_losses_;
};

SequenceTagger train_ingredient_tagger(const std::vector<AnnotatedLine>& lines, const TaggerConfig& config);

/// Maximal runs of non-function-word tokens with probability >= 0.5; span
/// probability is the mean token probability.
std::vector<CandidateSpan> extract_candidates(const SequenceTagger& tagger, const Tokens& line, int source_line = 0);

// ---------------------------------------------------------------------------

/// Binary logistic regression over (probability, length, log corpus frequency)
/// deciding whether a candidate is a core ingredient entity.
class CandidateClusterer {
 public:
  static constexpr int kFeatures = 3;

  CandidateClusterer() = default;

  /// Counts surfaces over `all_candidates` for the frequency feature.
  void set_frequencies(const std::vector<CandidateSpan>& all_candidates);
  std::array<double, kFeatures> features(const CandidateSpan& c) const;

  /// Fits on labelled candidates. Single-class data switches to the
  /// probability >= 0.5 rule and logs a warning.
  void fit(const std::vector<CandidateSpan>& candidates, const std::vector<int>& labels, std::uint64_t seed = 0);
  double true_probability(const CandidateSpan& c) const;
  /// Returns the candidates with true/false labels assigned.
  std::vector<CandidateSpan> cluster(std::vector<CandidateSpan> candidates) const;

  bool degenerate() const { return degenerate_; }

  void save(Checkpoint& ckpt, const std::string& prefix) const;
  static CandidateClusterer load(const Checkpoint& ckpt, const std::string& prefix);

 private:
  std::map<std::string, int> frequency_;
  Vector weights_ = Vector::Zero(kFeatures);
  double bias_ = 0.0;
  Vector mean_ = Vector::Zero(kFeatures);
  Vector scale_ = Vector::Ones(kFeatures);
  bool degenerate_ = true;
};

/// Every maximal (longest-first, left to right) sub-sequence of a false span
/// that names a vocabulary entity becomes an ingredient term.
std::vector<KeyTerm> reexamine_false_sequences(const std::vector<CandidateSpan>& false_spans,
                                               const std::set<std::string>& entity_vocabulary);

// ---------------------------------------------------------------------------

enum class PartOfSpeech { kNoun, kVerb, kOther };

/// Lexicon lookup with suffix-rule fallback.
class PosTagger {
 public:
  PosTagger();
  PartOfSpeech tag(const std::string& token) const;

 private:
  std::set<std::string> nouns_;
  std::set<std::string> verbs_;
  std::set<std::string> other_;
};

/// Token standing in for removed ingredient entities.
inline const std::string kIngredientPlaceholder = "_ingredient_";

/// Nouns become utensils and verbs become actions. Tokens containing '_'
/// (joined entities, placeholders) are skipped.
std::vector<KeyTerm> extract_utensils_actions(const Tokens& text_without_ingredients);

// ---------------------------------------------------------------------------

/// Trained extraction models plus the corpus-wide true-entity vocabulary.
struct KeyTermExtractor {
  SequenceTagger tagger;
  CandidateClusterer clusterer;
  std::set<std::string> entity_vocabulary;

  void save(const std::filesystem::path& path) const;
  static KeyTermExtractor load(const std::filesystem::path& path);
};

struct ExtractorConfig {
  TaggerConfig tagger;
};

/// Trains tagger and clusterer on annotated pairs, then collects the true
/// entity vocabulary over `vocabulary_pairs`.
KeyTermExtractor train_extractor(const std::vector<corpus::RecipePair>& train_pairs,
                                 const std::vector<corpus::RecipePair>& vocabulary_pairs,
                                 const ExtractorConfig& config);

/// Candidates of every ingredient line of `recipe`, clustered.
std::vector<CandidateSpan> clustered_candidates(const corpus::Recipe& recipe, const SequenceTagger& tagger,
                                                const CandidateClusterer& clusterer);

std::set<std::string> build_entity_vocabulary(const std::vector<corpus::RecipePair>& pairs,
                                              const SequenceTagger& tagger, const CandidateClusterer& clusterer);

/// True entities, re-examined recoveries, utensils and actions; deduplicated
/// with ingredient kind taking precedence.
KeyTermSet extract_key_terms(const corpus::Recipe& recipe, const SequenceTagger& tagger,
                             const CandidateClusterer& clusterer, const std::set<std::string>& entity_vocabulary);
KeyTermSet extract_key_terms(const corpus::Recipe& recipe, const KeyTermExtractor& extractor);

/// Span-level precision/recall/F1 of tagger candidates against annotations.
struct SpanScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};
SpanScore score_spans(const SequenceTagger& tagger, const std::vector<corpus::RecipePair>& pairs);

}  // namespace seje::terms
