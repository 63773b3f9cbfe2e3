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

#include "seje/term_rate.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace seje::rating {

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "tfidf") return Algorithm::kTfidf;
  if (s == "textrank") return Algorithm::kTextRank;
  if (s == "embedding" || s == "embedding_similarity") return Algorithm::kEmbeddingSimilarity;
  throw ConfigError("unknown rater '" + s + "' (expected tfidf|textrank|embedding)");
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kTfidf:
      return "tfidf";
    case Algorithm::kTextRank:
      return "textrank";
    case Algorithm::kEmbeddingSimilarity:
      return "embedding";
  }
  return "tfidf";
}

void RaterConfig::validate() const {
  if (!(textrank_damping > 0 && textrank_damping < 1)) throw ConfigError("textrank damping must lie in (0, 1)");
  if (textrank_iters < 1) throw ConfigError("textrank iterations must be >= 1");
  if (textrank_window < 2) throw ConfigError("textrank window must be >= 2");
  if (filter_threshold && *filter_threshold < 0) throw ConfigError("filter threshold must be >= 0");
}

std::vector<TermRating> normalize(std::vector<TermRating> raw) {
  double sum = 0.0;
  for (const auto& r : raw) sum += std::max(0.0, r.weight);
  for (auto& r : raw) r.weight = sum > 0 ? std::max(0.0, r.weight) / sum : 1.0 / static_cast<double>(raw.size());
  return raw;
}

TfidfModel::TfidfModel(const std::vector<TermDocument>& documents) : documents_(documents.size()) {
  for (const auto& doc : documents) {
    const std::set<std::string> distinct(doc.begin(), doc.end());
    for (const auto& t : distinct) ++df_[t];
  }
}

std::size_t TfidfModel::document_frequency(const std::string& term) const {
  auto it = df_.find(term);
  return it == df_.end() ? 0 : it->second;
}

std::vector<TermRating> TfidfModel::raw_weights(const TermDocument& document) const {
  std::vector<TermRating> out;
  std::map<std::string, std::size_t> tf;
  for (const auto& t : document) {
    if (tf[t]++ == 0) out.push_back({t, 0.0});
  }
  const double n_docs = static_cast<double>(std::max<std::size_t>(documents_, 1));
  std::size_t unseen = 0;
  for (auto& r : out) {
    std::size_t df = document_frequency(r.surface);
    if (df == 0) {
      df = 1;
      ++unseen;
    }
    r.weight = static_cast<double>(tf[r.surface]) * std::log(n_docs / static_cast<double>(df));
  }
  if (unseen) spdlog::debug("tfidf: {} term(s) absent from corpus statistics, df set to 1", unseen);
  return out;
}

std::vector<TermRating> rate_tfidf(const TfidfModel& model, const TermDocument& document) {
  if (document.empty()) return {};
  return normalize(model.raw_weights(document));
}

std::vector<TermRating> rate_textrank(const TermDocument& document, const RaterConfig& config) {
  config.validate();
  std::vector<std::string> nodes;
  std::map<std::string, std::size_t> id;
  for (const auto& t : document)
    if (id.emplace(t, nodes.size()).second) nodes.push_back(t);
  if (nodes.empty()) return {};
  if (nodes.size() == 1) return {{nodes[0], 1.0}};

  const std::size_t n = nodes.size();
  std::vector<std::set<std::size_t>> adj(n);
  const std::size_t window = static_cast<std::size_t>(config.textrank_window);
  for (std::size_t i = 0; i < document.size(); ++i)
    for (std::size_t j = i + 1; j < std::min(document.size(), i + window); ++j) {
      const std::size_t a = id[document[i]], b = id[document[j]];
      if (a == b) continue;
      adj[a].insert(b);
      adj[b].insert(a);
    }

  const double d = config.textrank_damping;
  std::vector<double> score(n, 1.0), next(n);
  for (int it = 0; it < config.textrank_iters; ++it) {
    double delta = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      double s = 0.0;
      for (std::size_t u : adj[v]) s += score[u] / static_cast<double>(adj[u].size());
      next[v] = (1.0 - d) + d * s;
      delta = std::max(delta, std::abs(next[v] - score[v]));
    }
    score.swap(next);
    if (delta < 1e-6) break;
  }
  std::vector<TermRating> out;
  for (std::size_t v = 0; v < n; ++v) out.push_back({nodes[v], score[v]});
  return normalize(std::move(out));
}

std::vector<TermRating> rate_embedding_similarity(const std::vector<std::string>& terms, const Tokens& recipe_tokens,
                                                  const textsem::WordEmbeddingTable& table) {
  std::vector<TermRating> out;
  if (terms.empty()) return out;
  Vector doc = Vector::Zero(table.dim());
  int known = 0;
  for (const auto& tok : recipe_tokens)
    if (auto r = table.row(tok)) {
      doc += *r;
      ++known;
    }
  if (known) doc /= known;
  const double doc_norm = doc.norm();
  if (doc_norm == 0.0) {
    spdlog::warn("embedding rater: document embedding is zero, using uniform weights");
    for (const auto& t : terms) out.push_back({t, 1.0});
    return normalize(std::move(out));
  }
  for (const auto& t : terms) {
    const Vector e = textsem::embed_term(table, t);
    const double en = e.norm();
    const double cos = en > 0 ? e.dot(doc) / (en * doc_norm) : 0.0;
    out.push_back({t, std::max(0.0, cos)});
  }
  return normalize(std::move(out));
}

std::vector<TermRating> filter_terms(const std::vector<TermRating>& ratings, double k) {
  if (k < 0) throw ConfigError("filter threshold must be >= 0");
  if (ratings.empty()) return {};
  std::vector<TermRating> kept;
  for (const auto& r : ratings)
    if (r.weight >= k) kept.push_back(r);
  if (kept.empty()) {
    auto best = std::max_element(ratings.begin(), ratings.end(),
                                 [](const TermRating& a, const TermRating& b) { return a.weight < b.weight; });
    return {{best->surface, 1.0}};
  }
  return normalize(std::move(kept));
}

TermDocument term_document(const terms::KeyTermSet& set, const Tokens& joined_text) {
  std::set<std::string> surfaces;
  for (const auto& t : set.terms) surfaces.insert(t.surface);
  TermDocument doc;
  std::set<std::string> seen;
  for (const auto& tok : joined_text)
    if (surfaces.count(tok)) {
      doc.push_back(tok);
      seen.insert(tok);
    }
  for (const auto& t : set.terms)
    if (!seen.count(t.surface)) {
      doc.push_back(t.surface);
      seen.insert(t.surface);
    }
  return doc;
}

void apply_ratings(terms::KeyTermSet& set, const std::vector<TermRating>& ratings) {
  std::map<std::string, double> w;
  for (const auto& r : ratings) w[r.surface] = r.weight;
  std::vector<terms::KeyTerm> kept;
  for (auto& t : set.terms) {
    auto it = w.find(t.surface);
    if (it == w.end()) continue;
    t.weight = it->second;
    kept.push_back(t);
  }
  set.terms = std::move(kept);
}

}  // namespace seje::rating
