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

#include "seje/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <fstream>
#include <json.hpp>
#include <map>

namespace seje::pipeline {

void PreprocessConfig::set_seed(std::uint64_t s) {
  seed = s;
  extractor.tagger.seed = s;
  cbow.seed = s;
  sentence.seed = s;
  classifier.seed = s;
}

void PreprocessConfig::apply(const KeyValueConfig& kv) {
  std::uint64_t s = seed;
  kv.read("seed", s);
  set_seed(s);
  kv.read("train_fraction", train_fraction);
  kv.read("val_fraction", val_fraction);
  kv.read("tagger_embedding_dim", extractor.tagger.embedding_dim);
  kv.read("tagger_hidden", extractor.tagger.hidden_size);
  kv.read("tagger_epochs", extractor.tagger.epochs);
  kv.read("tagger_learning_rate", extractor.tagger.learning_rate);
  kv.read("d_w", cbow.dim);
  kv.read("cbow_window", cbow.window);
  kv.read("cbow_negatives", cbow.negatives);
  kv.read("cbow_epochs", cbow.epochs);
  kv.read("cbow_learning_rate", cbow.learning_rate);
  kv.read("d_s", sentence.dim);
  kv.read("sentence_embedding_dim", sentence.embedding_dim);
  kv.read("sentence_decoder_hidden", sentence.decoder_hidden);
  kv.read("sentence_epochs", sentence.epochs);
  kv.read("sentence_learning_rate", sentence.learning_rate);
  kv.read("classifier_epochs", classifier.epochs);
  kv.read("classifier_learning_rate", classifier.learning_rate);
  std::string rater_name;
  kv.read("rater", rater_name);
  if (!rater_name.empty()) rater.algorithm = rating::algorithm_from_string(rater_name);
  double threshold = -1.0;
  kv.read("filter_threshold", threshold);
  if (kv.has("filter_threshold")) rater.filter_threshold = threshold;
  kv.read("textrank_damping", rater.textrank_damping);
  kv.read("textrank_window", rater.textrank_window);
}

const std::vector<std::string>& PreprocessConfig::keys() {
  static const std::vector<std::string> k = {
      "seed",           "train_fraction",         "val_fraction",           "tagger_embedding_dim",
      "tagger_hidden",  "tagger_epochs",          "tagger_learning_rate",   "d_w",
      "cbow_window",    "cbow_negatives",         "cbow_epochs",            "cbow_learning_rate",
      "d_s",            "sentence_embedding_dim", "sentence_decoder_hidden", "sentence_epochs",
      "sentence_learning_rate", "classifier_epochs", "classifier_learning_rate", "rater",
      "filter_threshold", "textrank_damping",     "textrank_window"};
  return k;
}

void PreprocessConfig::validate() const {
  if (!(train_fraction > 0 && val_fraction > 0 && train_fraction + val_fraction < 1))
    throw ConfigError("train_fraction and val_fraction must be positive and sum to less than 1");
  rater.validate();
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& PhaseOne::artifact_files() {
  static const std::vector<std::string> files = {"extractor.ckpt", "keyterms.jsonl",    "words.emb",
                                                 "sentence_encoder.ckpt", "classifier.ckpt", "split.json"};
  return files;
}

void PhaseOne::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  extractor.save(dir / "extractor.ckpt");
  terms::save_key_terms(key_terms, dir / "keyterms.jsonl");
  words.save(dir / "words.emb");
  sentences.save(dir / "sentence_encoder.ckpt");
  classifier.save(dir / "classifier.ckpt");
  nlohmann::ordered_json j;
  j["categories"] = categories.labels();
  j["train"] = split.train;
  j["val"] = split.val;
  j["test"] = split.test;
  std::ofstream(dir / "split.json") << j.dump(2) << "\n";
}

PhaseOne PhaseOne::load(const std::filesystem::path& dir) {
  for (const auto& f : artifact_files())
    if (!std::filesystem::exists(dir / f)) throw ConfigError("missing Phase I artifact " + (dir / f).string());
  PhaseOne p;
  std::ifstream in(dir / "split.json");
  nlohmann::json j;
  try {
    in >> j;
    p.categories = corpus::CategoryVocabulary(j.at("categories").get<std::vector<std::string>>());
    p.split.train = j.at("train").get<std::vector<std::string>>();
    p.split.val = j.at("val").get<std::vector<std::string>>();
    p.split.test = j.at("test").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("split.json: " + std::string(e.what()));
  }
  p.extractor = terms::KeyTermExtractor::load(dir / "extractor.ckpt");
  p.key_terms = terms::load_key_terms(dir / "keyterms.jsonl");
  p.words = textsem::WordEmbeddingTable::load(dir / "words.emb");
  p.sentences = textsem::SentenceEncoder::load(dir / "sentence_encoder.ckpt");
  p.classifier = imagesem::CategoryClassifier::load(dir / "classifier.ckpt");
  return p;
}

// ---------------------------------------------------------------------------

Tokens joined_text(const corpus::Recipe& recipe, const std::set<std::string>& entity_vocabulary) {
  return EntityJoiner(entity_vocabulary).apply(recipe.full_text());
}

terms::KeyTermSet rate_key_terms(terms::KeyTermSet set, const Tokens& joined, const rating::RaterConfig& config,
                                 const rating::TfidfModel& tfidf, const textsem::WordEmbeddingTable& words) {
  const rating::TermDocument doc = rating::term_document(set, joined);
  std::vector<rating::TermRating> ratings;
  switch (config.algorithm) {
    case rating::Algorithm::kTfidf:
      ratings = rating::rate_tfidf(tfidf, doc);
      break;
    case rating::Algorithm::kTextRank:
      ratings = rating::rate_textrank(doc, config);
      break;
    case rating::Algorithm::kEmbeddingSimilarity: {
      std::vector<std::string> surfaces;
      for (const auto& t : set.terms) surfaces.push_back(t.surface);
      ratings = rating::rate_embedding_similarity(surfaces, joined, words);
      break;
    }
  }
  if (config.filter_threshold) ratings = rating::filter_terms(ratings, *config.filter_threshold);
  rating::apply_ratings(set, ratings);
  return set;
}

static std::vector<corpus::RecipePair> select(const corpus::Corpus& corpus, const std::vector<std::string>& ids) {
  std::map<std::string, const corpus::RecipePair*> by_id;
  for (const auto& p : corpus.pairs) by_id[p.id()] = &p;
  std::vector<corpus::RecipePair> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw ConfigError("split references unknown pair id " + id);
    out.push_back(*it->second);
  }
  return out;
}

PhaseOne preprocess(const corpus::Corpus& corpus, const PreprocessConfig& config) {
  config.validate();
  PhaseOne out;
  out.categories = corpus.categories;
  const corpus::Split parts = corpus::split(corpus, config.train_fraction, config.val_fraction, config.seed);
  for (const auto& p : parts.train) out.split.train.push_back(p.id());
  for (const auto& p : parts.val) out.split.val.push_back(p.id());
  for (const auto& p : parts.test) out.split.test.push_back(p.id());

  spdlog::info("training key-term extractor on {} pairs", parts.train.size());
  out.extractor = terms::train_extractor(parts.train, corpus.pairs, config.extractor);

  std::vector<Tokens> joined;
  joined.reserve(corpus.size());
  for (const auto& p : corpus.pairs) joined.push_back(joined_text(p.recipe, out.extractor.entity_vocabulary));

  std::set<std::string> train_ids(out.split.train.begin(), out.split.train.end());
  std::vector<Tokens> train_texts;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    if (train_ids.count(corpus.pairs[i].id())) train_texts.push_back(joined[i]);

  spdlog::info("training CBOW word vectors (d_w = {})", config.cbow.dim);
  out.words = textsem::train_cbow(train_texts, config.cbow).table;

  std::vector<terms::KeyTermSet> raw;
  raw.reserve(corpus.size());
  for (const auto& p : corpus.pairs) raw.push_back(terms::extract_key_terms(p.recipe, out.extractor));
  std::vector<rating::TermDocument> train_docs;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    if (train_ids.count(corpus.pairs[i].id())) train_docs.push_back(rating::term_document(raw[i], joined[i]));
  const rating::TfidfModel tfidf(train_docs);
  for (std::size_t i = 0; i < corpus.size(); ++i)
    out.key_terms.push_back(rate_key_terms(raw[i], joined[i], config.rater, tfidf, out.words));

  spdlog::info("training sentence encoder (d_s = {})", config.sentence.dim);
  std::vector<std::vector<Tokens>> instructions;
  for (const auto& p : parts.train) instructions.push_back(p.recipe.instructions);
  out.sentences = textsem::train_sentence_encoder(instructions, config.sentence);

  spdlog::info("training image category classifier");
  std::vector<corpus::FoodImage> train_images, val_images;
  for (const auto& p : parts.train) train_images.push_back(p.image);
  for (const auto& p : parts.val) val_images.push_back(p.image);
  out.classifier = imagesem::train_category_classifier(train_images, val_images, corpus.categories, config.classifier);
  spdlog::info("classifier validation accuracy {:.3f}", out.classifier.validation_accuracy());
  return out;
}

std::vector<trainer::PreparedPair> prepare_pairs(const std::vector<corpus::RecipePair>& pairs, const PhaseOne& phase_one) {
  std::map<std::string, const terms::KeyTermSet*> sets;
  for (const auto& s : phase_one.key_terms) sets[s.recipe_id] = &s;
  std::vector<trainer::PreparedPair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    trainer::PreparedPair q;
    q.id = p.id();
    q.sentences = textsem::encode_instructions(phase_one.sentences, p.recipe);
    const auto it = sets.find(p.id());
    q.key_term_feature = it != sets.end() ? textsem::key_term_feature(*it->second, phase_one.words)
                                          : textsem::key_term_feature(terms::extract_key_terms(p.recipe, phase_one.extractor),
                                                                      phase_one.words);
    q.pixels = p.image.pixels;
    const imagesem::Prediction pred = imagesem::predict_category(phase_one.classifier, p.image.pixels);
    q.category_vector = imagesem::category_embedding(pred.label, phase_one.words);
    q.category = phase_one.categories.index(p.category());
    out.push_back(std::move(q));
  }
  return out;
}

PreparedSplit prepare_split(const corpus::Corpus& corpus, const PhaseOne& phase_one) {
  return {prepare_pairs(select(corpus, phase_one.split.train), phase_one),
          prepare_pairs(select(corpus, phase_one.split.val), phase_one),
          prepare_pairs(select(corpus, phase_one.split.test), phase_one)};
}

}  // namespace seje::pipeline
