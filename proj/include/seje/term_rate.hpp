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
#include <optional>
#include <string>
#include <vector>

#include "seje/term_extract.hpp"
#include "seje/text_sem.hpp"

namespace seje::rating {

struct TermRating {
  std::string surface;
  double weight = 0.0;

  bool operator==(const TermRating&) const = default;
};

enum class Algorithm { kTfidf, kTextRank, kEmbeddingSimilarity };

Algorithm algorithm_from_string(const std::string& s);
std::string to_string(Algorithm a);

struct RaterConfig {
  Algorithm algorithm = Algorithm::kTfidf;
  double textrank_damping = 0.85;
  int textrank_window = 2;
  int textrank_iters = 50;
  std::optional<double> filter_threshold;

  void validate() const;
};

/// Term occurrences of one recipe, in text order (a multiset document).
using TermDocument = std::vector<std::string>;

/// Scales raw non-negative weights to sum 1; all-zero input becomes uniform.
std::vector<TermRating> normalize(std::vector<TermRating> raw);

/// Document frequencies over a corpus of term documents.
class TfidfModel {
 public:
  TfidfModel() = default;
  explicit TfidfModel(const std::vector<TermDocument>& documents);

  std::size_t documents() const { return documents_; }
  /// Number of documents containing `term`; 0 when unseen.
  std::size_t document_frequency(const std::string& term) const;
  /// Unnormalised tf * ln(|D| / df) per distinct term in first-seen order.
  std::vector<TermRating> raw_weights(const TermDocument& document) const;

 private:
  std::size_t documents_ = 0;
  std::map<std::string, std::size_t> df_;
};

std::vector<TermRating> rate_tfidf(const TfidfModel& model, const TermDocument& document);
std::vector<TermRating> rate_textrank(const TermDocument& document, const RaterConfig& config);
/// weight(t) proportional to max(0, cos(embed(t), mean of recipe token rows)).
std::vector<TermRating> rate_embedding_similarity(const std::vector<std::string>& terms, const Tokens& recipe_tokens,
                                                  const textsem::WordEmbeddingTable& table);

/// Drops weights below k and renormalises; keeps the single largest term if
/// everything would be removed.
std::vector<TermRating> filter_terms(const std::vector<TermRating>& ratings, double k);

/// Occurrences of the set's terms in an entity-joined token stream. Terms
/// that never occur are appended once.
TermDocument term_document(const terms::KeyTermSet& set, const Tokens& joined_text);

/// Writes weights into `set`; terms missing from `ratings` are removed.
void apply_ratings(terms::KeyTermSet& set, const std::vector<TermRating>& ratings);

}  // namespace seje::rating
