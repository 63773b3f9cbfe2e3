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

#include "seje/evalkit.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <json.hpp>

#include "seje/rng.hpp"

namespace seje::eval {

std::string to_string(Direction d) {
  return d == Direction::kImageToRecipe ? "image_to_recipe" : "recipe_to_image";
}

static Vector distances(const Vector& query, const Matrix& candidates) {
  if (candidates.rows() == 0) throw Error("rank: no candidates");
  if (candidates.cols() != query.size()) throw Error("rank: query and candidate dimensions differ");
  return (candidates.rowwise() - query.transpose()).rowwise().norm();
}

std::vector<Index> rank(const Vector& query, const Matrix& candidates) {
  const Vector d = distances(query, candidates);
  std::vector<Index> order(static_cast<std::size_t>(candidates.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return d[a] < d[b]; });
  return order;
}

Index rank_of(const Vector& query, const Matrix& candidates, Index truth) {
  const Vector d = distances(query, candidates);
  Index ahead = 0;
  for (Index j = 0; j < d.size(); ++j)
    if (d[j] < d[truth] || (d[j] == d[truth] && j < truth)) ++ahead;
  return ahead + 1;
}

double median_rank(std::vector<Index> ranks) {
  if (ranks.empty()) throw Error("median of no ranks");
  std::sort(ranks.begin(), ranks.end());
  const std::size_t m = ranks.size();
  if (m % 2 == 1) return static_cast<double>(ranks[m / 2]);
  return 0.5 * static_cast<double>(ranks[m / 2 - 1] + ranks[m / 2]);
}

static DirectionMetrics direction_metrics(const Matrix& queries, const Matrix& candidates, const std::vector<int>& ks) {
  std::vector<Index> ranks;
  ranks.reserve(static_cast<std::size_t>(queries.rows()));
  for (Index i = 0; i < queries.rows(); ++i) ranks.push_back(rank_of(queries.row(i).transpose(), candidates, i));
  DirectionMetrics m;
  m.medr = median_rank(ranks);
  for (int k : ks) {
    const auto hits = std::count_if(ranks.begin(), ranks.end(), [k](Index r) { return r <= k; });
    m.recall[k] = 100.0 * static_cast<double>(hits) / static_cast<double>(ranks.size());
  }
  return m;
}

SubsetMetrics evaluate_subset(const Matrix& recipe_embs, const Matrix& image_embs, const std::vector<int>& ks) {
  const Index m = recipe_embs.rows();
  if (image_embs.rows() != m || image_embs.cols() != recipe_embs.cols())
    throw Error("evaluate_subset: embedding matrices differ in shape");
  const int max_k = ks.empty() ? 1 : *std::max_element(ks.begin(), ks.end());
  if (m < max_k) throw Error("evaluate_subset: subset of " + std::to_string(m) + " is smaller than K=" + std::to_string(max_k));
  return {direction_metrics(image_embs, recipe_embs, ks), direction_metrics(recipe_embs, image_embs, ks)};
}

static double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

static double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

static void finalize(RetrievalReport& r) {
  r.mean_medr = mean(r.medr);
  r.median_medr = median(r.medr);
  for (const auto& [k, values] : r.recall) {
    r.mean_recall[k] = mean(values);
    r.median_recall[k] = median(values);
  }
}

static nlohmann::ordered_json report_json(const RetrievalReport& r) {
  nlohmann::ordered_json j;
  j["direction"] = to_string(r.direction);
  j["subset_size"] = r.subset_size;
  j["trials"] = r.trials;
  j["medr"] = r.medr;
  for (const auto& [k, v] : r.recall) j["recall"]["R@" + std::to_string(k)] = v;
  j["mean_medr"] = r.mean_medr;
  j["median_medr"] = r.median_medr;
  for (const auto& [k, v] : r.mean_recall) j["mean_recall"]["R@" + std::to_string(k)] = v;
  for (const auto& [k, v] : r.median_recall) j["median_recall"]["R@" + std::to_string(k)] = v;
  return j;
}

std::string RetrievalReport::to_json() const { return report_json(*this).dump(2); }

std::string ProtocolReport::to_json() const {
  nlohmann::ordered_json j;
  j["image_to_recipe"] = report_json(image_to_recipe);
  j["recipe_to_image"] = report_json(recipe_to_image);
  return j.dump(2);
}

// log C(n, k) >= log(trials) decides whether enough distinct subsets exist.
static bool enough_distinct_subsets(int n, int k, int trials) {
  double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return log_c >= std::log(static_cast<double>(trials)) - 1e-9;
}

ProtocolReport evaluate_protocol(const Matrix& recipe_embs, const Matrix& image_embs, int subset_size, int trials,
                                 std::uint64_t seed, const std::vector<int>& ks) {
  const int n = static_cast<int>(recipe_embs.rows());
  if (trials < 1) throw ConfigError("trials must be positive");
  if (subset_size < 1 || subset_size > n)
    throw ConfigError("subset size " + std::to_string(subset_size) + " exceeds the " + std::to_string(n) + " test pairs");
  const bool unique = enough_distinct_subsets(n, subset_size, trials);
  ProtocolReport report;
  report.image_to_recipe.direction = Direction::kImageToRecipe;
  report.recipe_to_image.direction = Direction::kRecipeToImage;
  for (auto* r : {&report.image_to_recipe, &report.recipe_to_image}) {
    r->subset_size = subset_size;
    r->trials = trials;
  }
  std::set<std::vector<int>> seen;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> subset;
    for (int attempt = 0;; ++attempt) {
      Rng rng(seed, 0xe0a1 + static_cast<std::uint64_t>(t) * 1000 + static_cast<std::uint64_t>(attempt));
      std::vector<int> all(static_cast<std::size_t>(n));
      std::iota(all.begin(), all.end(), 0);
      rng.shuffle(all);
      subset.assign(all.begin(), all.begin() + subset_size);
      std::sort(subset.begin(), subset.end());
      if (!unique || seen.insert(subset).second) break;
    }
    Matrix r(subset_size, recipe_embs.cols()), v(subset_size, image_embs.cols());
    for (int i = 0; i < subset_size; ++i) {
      r.row(i) = recipe_embs.row(subset[static_cast<std::size_t>(i)]);
      v.row(i) = image_embs.row(subset[static_cast<std::size_t>(i)]);
    }
    const SubsetMetrics m = evaluate_subset(r, v, ks);
    report.image_to_recipe.medr.push_back(m.image_to_recipe.medr);
    report.recipe_to_image.medr.push_back(m.recipe_to_image.medr);
    for (int k : ks) {
      report.image_to_recipe.recall[k].push_back(m.image_to_recipe.recall.at(k));
      report.recipe_to_image.recall[k].push_back(m.recipe_to_image.recall.at(k));
    }
  }
  finalize(report.image_to_recipe);
  finalize(report.recipe_to_image);
  return report;
}

}  // namespace seje::eval
