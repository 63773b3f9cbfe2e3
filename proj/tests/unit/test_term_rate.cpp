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

#include <algorithm>
#include <cmath>
#include <map>

#include "oracles.hpp"
#include "seje/term_rate.hpp"

namespace seje::rating {
namespace {

double weight_of(const std::vector<TermRating>& r, const std::string& s) {
  for (const auto& t : r)
    if (t.surface == s) return t.weight;
  ADD_FAILURE() << "missing term " << s;
  return -1;
}

void expect_distribution(const std::vector<TermRating>& r) {
  double sum = 0;
  for (const auto& t : r) {
    EXPECT_GE(t.weight, 0.0);
    sum += t.weight;
  }
  if (!r.empty()) EXPECT_NEAR(sum, 1.0, 1e-9);
}

/// Seeded random term document over a small alphabet.
TermDocument random_document(Rng& rng, std::size_t max_len, int alphabet) {
  TermDocument d;
  const auto len = 1 + rng.below(max_len);
  for (std::uint64_t i = 0; i < len; ++i) d.push_back("t" + std::to_string(rng.below(static_cast<std::uint64_t>(alphabet))));
  return d;
}

TEST(Tfidf, ThreeDocumentHandComputation) {
  const TfidfModel m({{"a", "a", "b"}, {"b", "c"}, {"c"}});
  const auto raw = m.raw_weights({"a", "a", "b"});
  EXPECT_NEAR(weight_of(raw, "a"), 2 * std::log(3.0), 1e-12);
  EXPECT_NEAR(weight_of(raw, "b"), std::log(1.5), 1e-12);
  const auto r = rate_tfidf(m, {"a", "a", "b"});
  const double expect = 2 * std::log(3.0) / (2 * std::log(3.0) + std::log(1.5));
  EXPECT_NEAR(weight_of(r, "a"), expect, 1e-12);
  EXPECT_NEAR(expect, 0.844, 5e-4);
  expect_distribution(r);
}

TEST(Tfidf, UbiquitousTermHasZeroRawWeight) {
  const TfidfModel m({{"a", "x"}, {"x"}, {"b", "x"}});
  EXPECT_EQ(weight_of(m.raw_weights({"a", "x"}), "x"), 0.0);
}

TEST(Tfidf, SingleDocumentSingleTerm) {
  const TfidfModel m({{"a"}});
  const auto r = rate_tfidf(m, {"a"});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].weight, 1.0, 1e-12);
}

TEST(Tfidf, UnseenTermIsMaximallyRare) {
  const TfidfModel m({{"a"}, {"a", "b"}});
  EXPECT_EQ(m.document_frequency("zzz"), 0u);
  EXPECT_NEAR(weight_of(m.raw_weights({"zzz"}), "zzz"), std::log(2.0), 1e-12);
}

TEST(Tfidf, ScalingCountsLeavesWeightsUnchanged) {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TermDocument> docs;
    for (int k = 0; k < 6; ++k) docs.push_back(random_document(rng, 8, 6));
    const TfidfModel m(docs);
    const TermDocument& d = docs[0];
    TermDocument scaled;
    const int factor = 2 + static_cast<int>(rng.below(3));
    for (const auto& t : d)
      for (int f = 0; f < factor; ++f) scaled.push_back(t);
    const auto a = rate_tfidf(m, d), b = rate_tfidf(m, scaled);
    ASSERT_EQ(a.size(), b.size());
    expect_distribution(a);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].surface, b[i].surface);
      EXPECT_NEAR(a[i].weight, b[i].weight, 1e-12);
    }
  }
}

TEST(Normalize, AllZeroBecomesUniform) {
  const auto r = normalize({{"a", 0.0}, {"b", 0.0}});
  EXPECT_NEAR(r[0].weight, 0.5, 1e-15);
  EXPECT_NEAR(r[1].weight, 0.5, 1e-15);
}

TEST(TextRank, SymmetricPairSplitsEvenly) {
  const auto r = rate_textrank({"a", "b", "a", "b"}, RaterConfig{});
  EXPECT_NEAR(weight_of(r, "a"), 0.5, 1e-9);
  EXPECT_NEAR(weight_of(r, "b"), 0.5, 1e-9);
}

/// Solves s = (1 - d) + d M s directly, M the degree-normalised adjacency.
Vector pagerank_oracle(const Matrix& adjacency, double d) {
  const Index n = adjacency.rows();
  Matrix m = Matrix::Zero(n, n);
  for (Index u = 0; u < n; ++u) {
    const double deg = adjacency.col(u).sum();
    if (deg > 0) m.col(u) = adjacency.col(u) / deg;
  }
  const Matrix a = Matrix::Identity(n, n) - d * m;
  Vector s = a.colPivHouseholderQr().solve(Vector::Constant(n, 1.0 - d));
  return s / s.sum();
}

TEST(TextRank, PathCenterWinsAndMatchesEigenOracle) {
  const auto r = rate_textrank({"a", "b", "c"}, RaterConfig{});
  Matrix adj(3, 3);
  adj << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  const Vector oracle = pagerank_oracle(adj, 0.85);
  // 50 iterations leave about 0.85^50 of the initial error on a bipartite graph
  EXPECT_NEAR(weight_of(r, "a"), oracle[0], 1e-4);
  EXPECT_NEAR(weight_of(r, "b"), oracle[1], 1e-4);
  EXPECT_NEAR(weight_of(r, "c"), oracle[2], 1e-4);
  EXPECT_GT(weight_of(r, "b"), weight_of(r, "a"));
  EXPECT_GT(weight_of(r, "b"), weight_of(r, "c"));
}

TEST(TextRank, RandomGraphsMatchOracleAndPermute) {
  Rng rng(42);
  RaterConfig cfg;
  cfg.textrank_iters = 500;
  for (int trial = 0; trial < 50; ++trial) {
    const TermDocument doc = random_document(rng, 12, 5);
    const auto r = rate_textrank(doc, cfg);
    expect_distribution(r);
    std::map<std::string, Index> id;
    for (const auto& t : doc) id.emplace(t, static_cast<Index>(id.size()));
    if (id.size() < 2) continue;
    Matrix adj = Matrix::Zero(static_cast<Index>(id.size()), static_cast<Index>(id.size()));
    for (std::size_t i = 0; i + 1 < doc.size(); ++i)
      if (doc[i] != doc[i + 1]) adj(id[doc[i]], id[doc[i + 1]]) = adj(id[doc[i + 1]], id[doc[i]]) = 1;
    const Vector oracle = pagerank_oracle(adj, cfg.textrank_damping);
    for (const auto& [term, k] : id) EXPECT_NEAR(weight_of(r, term), oracle[k], 1e-6) << term;

    // relabelling terms relabels scores
    TermDocument renamed;
    for (const auto& t : doc) renamed.push_back("x" + t);
    const auto rr = rate_textrank(renamed, cfg);
    for (const auto& t : r) EXPECT_NEAR(weight_of(rr, "x" + t.surface), t.weight, 1e-12);
  }
}

TEST(TextRank, EmptyAndSingle) {
  EXPECT_TRUE(rate_textrank({}, RaterConfig{}).empty());
  const auto r = rate_textrank({"a", "a"}, RaterConfig{});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].weight, 1.0);
}

TEST(TextRank, ConfigValidation) {
  RaterConfig cfg;
  cfg.textrank_damping = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.textrank_damping = 0.85;
  cfg.textrank_iters = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

textsem::WordEmbeddingTable toy_table(const Matrix& rows, const std::vector<std::string>& vocab) {
  return textsem::WordEmbeddingTable(vocab, rows, 0);
}

TEST(EmbeddingSimilarity, IdenticalTokenGetsEverything) {
  Matrix m(2, 2);
  m << 1, 0, 0, 1;
  const auto table = toy_table(m, {"salt", "pan"});
  const auto r = rate_embedding_similarity({"salt", "pan"}, {"salt"}, table);
  EXPECT_NEAR(weight_of(r, "salt"), 1.0, 1e-12);
  EXPECT_NEAR(weight_of(r, "pan"), 0.0, 1e-12);
}

TEST(EmbeddingSimilarity, MatchesBruteForceCosine) {
  Rng rng(43);
  const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f", "g"};
  const Matrix m = seje::testing::random_matrix(rng, 7, 4);
  const auto table = toy_table(m, vocab);
  const Tokens text{"a", "f", "g", "b", "f"};
  const std::vector<std::string> terms{"a", "b", "c", "d", "e"};
  const auto r = rate_embedding_similarity(terms, text, table);
  Vector doc = (m.row(0) + m.row(5) + m.row(6) + m.row(1) + m.row(5)).transpose() / 5.0;
  std::vector<double> raw;
  for (Index k = 0; k < 5; ++k) {
    const Vector v = m.row(k).transpose();
    raw.push_back(std::max(0.0, v.dot(doc) / (v.norm() * doc.norm())));
  }
  const double total = raw[0] + raw[1] + raw[2] + raw[3] + raw[4];
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(weight_of(r, terms[k]), raw[k] / total, 1e-12);
}

TEST(EmbeddingSimilarity, UnknownDocumentIsUniform) {
  Matrix m(1, 2);
  m << 1, 0;
  const auto r = rate_embedding_similarity({"a", "b"}, {"zzz"}, toy_table(m, {"a"}));
  EXPECT_NEAR(weight_of(r, "a"), 0.5, 1e-12);
  EXPECT_NEAR(weight_of(r, "b"), 0.5, 1e-12);
}

TEST(Filter, ThresholdExample) {
  const auto r = filter_terms({{"a", 0.6}, {"b", 0.3}, {"c", 0.1}}, 0.15);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(weight_of(r, "a"), 0.6 / 0.9, 1e-12);
  EXPECT_NEAR(weight_of(r, "b"), 0.3 / 0.9, 1e-12);
}

TEST(Filter, ZeroIsIdentityAndAllRemovedKeepsMax) {
  const std::vector<TermRating> in{{"a", 0.5}, {"b", 0.25}, {"c", 0.25}};
  const auto same = filter_terms(in, 0.0);
  for (std::size_t i = 0; i < in.size(); ++i) EXPECT_NEAR(same[i].weight, in[i].weight, 1e-15);
  const auto kept = filter_terms(in, 0.9);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].surface, "a");
  EXPECT_EQ(kept[0].weight, 1.0);
}

TEST(Filter, IdempotentOnRandomRatings) {
  Rng rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TermRating> raw;
    const auto n = 1 + rng.below(8);
    for (std::uint64_t i = 0; i < n; ++i) raw.push_back({"t" + std::to_string(i), rng.uniform()});
    const auto r = normalize(raw);
    const double k = 0.3 * rng.uniform();
    const auto once = filter_terms(r, k);
    const auto twice = filter_terms(once, k);
    expect_distribution(once);
    ASSERT_EQ(once.size(), twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) EXPECT_NEAR(once[i].weight, twice[i].weight, 1e-12);
  }
}

TEST(TermDocument, CountsOccurrencesAndAppendsMissing) {
  terms::KeyTermSet set;
  set.add({"salt", terms::TermKind::kIngredient, 0});
  set.add({"pan", terms::TermKind::kUtensil, 0});
  set.add({"basil", terms::TermKind::kIngredient, 0});
  const TermDocument d = term_document(set, {"salt", "the", "pan", "salt"});
  EXPECT_EQ(std::count(d.begin(), d.end(), "salt"), 2);
  EXPECT_EQ(std::count(d.begin(), d.end(), "pan"), 1);
  EXPECT_EQ(std::count(d.begin(), d.end(), "basil"), 1);
  apply_ratings(set, {{"salt", 0.7}, {"pan", 0.3}});
  ASSERT_EQ(set.terms.size(), 2u);
  EXPECT_EQ(set.terms[0].weight, 0.7);
}

}  // namespace
}  // namespace seje::rating
