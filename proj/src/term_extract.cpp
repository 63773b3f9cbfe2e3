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

#include "seje/term_extract.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "seje/lexicon.hpp"

namespace seje::terms {

using nlohmann::json;

std::string to_string(TermKind kind) {
  switch (kind) {
    case TermKind::kIngredient:
      return "ingredient";
    case TermKind::kUtensil:
      return "utensil";
    case TermKind::kAction:
      return "action";
  }
  return "ingredient";
}

TermKind term_kind_from_string(const std::string& s) {
  if (s == "ingredient") return TermKind::kIngredient;
  if (s == "utensil") return TermKind::kUtensil;
  if (s == "action") return TermKind::kAction;
  throw SchemaError("unknown term kind '" + s + "'");
}

bool KeyTermSet::contains(const std::string& surface, TermKind kind) const {
  return std::any_of(terms.begin(), terms.end(), [&](const KeyTerm& t) { return t.surface == surface && t.kind == kind; });
}

bool KeyTermSet::add(KeyTerm term) {
  if (contains(term.surface, term.kind)) return false;
  terms.push_back(std::move(term));
  return true;
}

void save_key_terms(const std::vector<KeyTermSet>& sets, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  for (const auto& set : sets) {
    json terms = json::array();
    for (const auto& t : set.terms) terms.push_back({{"surface", t.surface}, {"kind", to_string(t.kind)}, {"weight", t.weight}});
    os << json{{"recipe_id", set.recipe_id}, {"terms", terms}}.dump() << '\n';
  }
}

std::vector<KeyTermSet> load_key_terms(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read " + path.string());
  std::vector<KeyTermSet> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json rec = json::parse(line);
      KeyTermSet set;
      set.recipe_id = rec.at("recipe_id").get<std::string>();
      for (const auto& t : rec.at("terms"))
        set.terms.push_back({t.at("surface").get<std::string>(), term_kind_from_string(t.at("kind").get<std::string>()),
                             t.at("weight").get<double>()});
      out.push_back(std::move(set));
    } catch (const json::exception& e) {
      throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// tagger

std::vector<AnnotatedLine> annotate_lines(const std::vector<corpus::RecipePair>& pairs) {
  std::vector<AnnotatedLine> out;
  for (const auto& p : pairs) {
    for (std::size_t l = 0; l < p.recipe.ingredient_lines.size(); ++l) {
      AnnotatedLine a;
      a.tokens = p.recipe.ingredient_lines[l];
      a.inside.assign(a.tokens.size(), 0);
      for (const auto& s : p.spans)
        if (s.line == static_cast<int>(l))
          for (int k = s.begin; k < s.end; ++k) a.inside[static_cast<std::size_t>(k)] = 1;
      out.push_back(std::move(a));
    }
  }
  return out;
}

SequenceTagger::SequenceTagger(std::vector<std::string> vocabulary, const TaggerConfig& config) : config_(config) {
  vocabulary_.push_back("<unk>");
  for (auto& w : vocabulary)
    if (w != "<unk>") vocabulary_.push_back(std::move(w));
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) index_[vocabulary_[i]] = static_cast<Index>(i);
  Rng rng(config.seed, 0x7a6);
  embedding_ = nn::Embedding("tagger.embedding", static_cast<Index>(vocabulary_.size()), config.embedding_dim, rng);
  forward_ = nn::Lstm("tagger.forward", config.embedding_dim, config.hidden_size, rng);
  backward_ = nn::Lstm("tagger.backward", config.embedding_dim, config.hidden_size, rng);
  output_ = nn::Linear("tagger.output", 2 * config.hidden_size, 1, rng);
}

Index SequenceTagger::token_id(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? 0 : it->second;
}

nn::ParamRefs SequenceTagger::params() {
  nn::ParamRefs out = embedding_.params();
  for (auto* p : forward_.params()) out.push_back(p);
  for (auto* p : backward_.params()) out.push_back(p);
  for (auto* p : output_.params()) out.push_back(p);
  return out;
}

std::vector<double> SequenceTagger::predict(const Tokens& tokens) const {
  const std::size_t T = tokens.size();
  std::vector<Vector> xs(T);
  for (std::size_t t = 0; t < T; ++t) xs[t] = embedding_.lookup(token_id(tokens[t]));
  std::vector<Vector> rev(xs.rbegin(), xs.rend());
  const nn::LstmTrace f = forward_.forward(xs);
  const nn::LstmTrace b = backward_.forward(rev);
  std::vector<double> probs(T);
  const Index H = forward_.hidden();
  Vector both(2 * H);
  for (std::size_t t = 0; t < T; ++t) {
    both << f.hidden[t], b.hidden[T - 1 - t];
    probs[t] = nn::sigmoid(output_.forward(both)[0]);
  }
  return probs;
}

double SequenceTagger::loss(const AnnotatedLine& line, bool accumulate) {
  const std::size_t T = line.tokens.size();
  if (T == 0) return 0.0;
  std::vector<Index> ids(T);
  std::vector<Vector> xs(T);
  for (std::size_t t = 0; t < T; ++t) {
    ids[t] = token_id(line.tokens[t]);
    xs[t] = embedding_.lookup(ids[t]);
  }
  std::vector<Vector> rev(xs.rbegin(), xs.rend());
  const nn::LstmTrace f = forward_.forward(xs);
  const nn::LstmTrace b = backward_.forward(rev);
  const Index H = forward_.hidden();
  std::vector<Vector> dhf(T, Vector::Zero(H));
  std::vector<Vector> dhb(T, Vector::Zero(H));
  double total = 0.0;
  Vector both(2 * H);
  for (std::size_t t = 0; t < T; ++t) {
    both << f.hidden[t], b.hidden[T - 1 - t];
    const double logit = output_.forward(both)[0];
    const double y = line.inside[t];
    // BCE with logits
    total += nn::softplus(logit) - y * logit;
    if (accumulate) {
      Vector dlogit(1);
      dlogit[0] = nn::sigmoid(logit) - y;
      const Vector dboth = output_.backward(both, dlogit);
      dhf[t] = dboth.head(H);
      dhb[T - 1 - t] = dboth.tail(H);
    }
  }
  if (accumulate) {
    const nn::LstmGrads gf = forward_.backward(f, dhf);
    const nn::LstmGrads gb = backward_.backward(b, dhb);
    for (std::size_t t = 0; t < T; ++t) embedding_.backward(ids[t], gf.inputs[t] + gb.inputs[T - 1 - t]);
  }
  return total;
}

void SequenceTagger::save(Checkpoint& ckpt, const std::string& prefix) const {
  auto* self = const_cast<SequenceTagger*>(this);
  ckpt.put_params(self->params(), prefix);
  ckpt.set_meta(prefix + "vocabulary", join(vocabulary_, "\n"));
  ckpt.set_meta(prefix + "embedding_dim", std::to_string(config_.embedding_dim));
  ckpt.set_meta(prefix + "hidden_size", std::to_string(config_.hidden_size));
}

SequenceTagger SequenceTagger::load(const Checkpoint& ckpt, const std::string& prefix) {
  TaggerConfig cfg;
  cfg.embedding_dim = std::stoi(ckpt.meta(prefix + "embedding_dim"));
  cfg.hidden_size = std::stoi(ckpt.meta(prefix + "hidden_size"));
  std::vector<std::string> vocab;
  std::istringstream ss(ckpt.meta(prefix + "vocabulary"));
  for (std::string w; std::getline(ss, w);) vocab.push_back(w);
  SequenceTagger tagger(vocab, cfg);
  ckpt.get_params(tagger.params(), prefix);
  return tagger;
}

SequenceTagger train_ingredient_tagger(const std::vector<AnnotatedLine>& lines, const TaggerConfig& config) {
  if (lines.empty()) throw ConfigError("tagger training set is empty");
  std::set<std::string> words;
  for (const auto& l : lines) words.insert(l.tokens.begin(), l.tokens.end());
  SequenceTagger tagger(std::vector<std::string>(words.begin(), words.end()), config);
  Adam adam(tagger.params(), AdamConfig{config.learning_rate});
  std::vector<std::size_t> order(lines.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t batch = static_cast<std::size_t>(std::max(1, config.batch_size));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(config.seed, 0x100 + static_cast<std::uint64_t>(epoch));
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      adam.zero_grad();
      const std::size_t stop = std::min(order.size(), start + batch);
      for (std::size_t k = start; k < stop; ++k) epoch_loss += tagger.loss(lines[order[k]], true);
      adam.step();
    }
    tagger.epoch_losses_.push_back(epoch_loss / static_cast<double>(lines.size()));
  }
  return tagger;
}

namespace {

bool is_function_word(const std::string& token) {
  static const std::set<std::string> words(lexicon::function_words().begin(), lexicon::function_words().end());
  return words.count(token) > 0;
}

}  // namespace

std::vector<CandidateSpan> extract_candidates(const SequenceTagger& tagger, const Tokens& line, int source_line) {
  std::vector<CandidateSpan> out;
  if (line.empty()) return out;
  const std::vector<double> probs = tagger.predict(line);
  // closed-class words never belong to an entity span
  auto member = [&](std::size_t t) { return probs[t] >= 0.5 && !is_function_word(line[t]); };
  std::size_t t = 0;
  while (t < line.size()) {
    if (!member(t)) {
      ++t;
      continue;
    }
    CandidateSpan span;
    span.source_line = source_line;
    span.begin = static_cast<int>(t);
    double sum = 0.0;
    while (t < line.size() && member(t)) {
      span.tokens.push_back(line[t]);
      sum += probs[t];
      ++t;
    }
    span.probability = sum / static_cast<double>(span.tokens.size());
    out.push_back(std::move(span));
  }
  return out;
}

// ---------------------------------------------------------------------------
// clusterer

void CandidateClusterer::set_frequencies(const std::vector<CandidateSpan>& all_candidates) {
  frequency_.clear();
  for (const auto& c : all_candidates) ++frequency_[c.surface()];
}

std::array<double, CandidateClusterer::kFeatures> CandidateClusterer::features(const CandidateSpan& c) const {
  auto it = frequency_.find(c.surface());
  const double freq = it == frequency_.end() ? 0.0 : it->second;
  return {c.probability, static_cast<double>(c.tokens.size()), std::log1p(freq)};
}

void CandidateClusterer::fit(const std::vector<CandidateSpan>& candidates, const std::vector<int>& labels,
                             std::uint64_t /*seed*/) {
  if (candidates.size() != labels.size()) throw Error("clusterer: candidates and labels differ in length");
  const auto positives = std::count(labels.begin(), labels.end(), 1);
  if (candidates.empty() || positives == 0 || positives == static_cast<long>(labels.size())) {
    spdlog::warn("candidate clusterer: single-class training data, falling back to probability >= 0.5");
    degenerate_ = true;
    return;
  }
  degenerate_ = false;
  const Index n = static_cast<Index>(candidates.size());
  Matrix x(n, kFeatures);
  for (Index i = 0; i < n; ++i) {
    const auto f = features(candidates[static_cast<std::size_t>(i)]);
    for (int k = 0; k < kFeatures; ++k) x(i, k) = f[static_cast<std::size_t>(k)];
  }
  mean_ = x.colwise().mean().transpose();
  for (int k = 0; k < kFeatures; ++k) {
    const double var = (x.col(k).array() - mean_[k]).square().mean();
    scale_[k] = var > 1e-12 ? std::sqrt(var) : 1.0;
    x.col(k) = ((x.col(k).array() - mean_[k]) / scale_[k]).matrix();
  }
  Vector y(n);
  for (Index i = 0; i < n; ++i) y[i] = labels[static_cast<std::size_t>(i)];
  weights_.setZero();
  bias_ = 0.0;
  // full-batch gradient descent on the mean log-loss with a small ridge term
  const double lr = 0.5;
  const double ridge = 1e-3;
  for (int it = 0; it < 2000; ++it) {
    Vector z = x * weights_;
    z.array() += bias_;
    Vector r(n);
    for (Index i = 0; i < n; ++i) r[i] = nn::sigmoid(z[i]) - y[i];
    weights_ -= lr * (x.transpose() * r / static_cast<double>(n) + ridge * weights_);
    bias_ -= lr * r.mean();
  }
}

double CandidateClusterer::true_probability(const CandidateSpan& c) const {
  if (degenerate_) return c.probability;
  const auto f = features(c);
  double z = bias_;
  for (int k = 0; k < kFeatures; ++k) z += weights_[k] * (f[static_cast<std::size_t>(k)] - mean_[k]) / scale_[k];
  return nn::sigmoid(z);
}

std::vector<CandidateSpan> CandidateClusterer::cluster(std::vector<CandidateSpan> candidates) const {
  for (auto& c : candidates) c.label = true_probability(c) >= 0.5 ? SpanLabel::kTrue : SpanLabel::kFalse;
  return candidates;
}

void CandidateClusterer::save(Checkpoint& ckpt, const std::string& prefix) const {
  Matrix lr(kFeatures * 3 + 1, 1);
  lr.block(0, 0, kFeatures, 1) = weights_;
  lr.block(kFeatures, 0, kFeatures, 1) = mean_;
  lr.block(2 * kFeatures, 0, kFeatures, 1) = scale_;
  lr(3 * kFeatures, 0) = bias_;
  ckpt.put(prefix + "logistic", lr);
  ckpt.set_meta(prefix + "degenerate", degenerate_ ? "1" : "0");
  std::string freq;
  for (const auto& [s, n] : frequency_) freq += s + "\t" + std::to_string(n) + "\n";
  ckpt.set_meta(prefix + "frequency", freq);
}

CandidateClusterer CandidateClusterer::load(const Checkpoint& ckpt, const std::string& prefix) {
  CandidateClusterer c;
  const Matrix& lr = ckpt.get(prefix + "logistic");
  c.weights_ = lr.block(0, 0, kFeatures, 1);
  c.mean_ = lr.block(kFeatures, 0, kFeatures, 1);
  c.scale_ = lr.block(2 * kFeatures, 0, kFeatures, 1);
  c.bias_ = lr(3 * kFeatures, 0);
  c.degenerate_ = ckpt.meta(prefix + "degenerate") == "1";
  std::istringstream ss(ckpt.meta(prefix + "frequency"));
  for (std::string line; std::getline(ss, line);) {
    const auto tab = line.find('\t');
    if (tab != std::string::npos) c.frequency_[line.substr(0, tab)] = std::stoi(line.substr(tab + 1));
  }
  return c;
}

// ---------------------------------------------------------------------------

std::vector<KeyTerm> reexamine_false_sequences(const std::vector<CandidateSpan>& false_spans,
                                               const std::set<std::string>& entity_vocabulary) {
  std::size_t longest = 1;
  for (const auto& e : entity_vocabulary) longest = std::max(longest, split_underscore(e).size());
  std::vector<KeyTerm> out;
  for (const auto& span : false_spans) {
    const Tokens& toks = span.tokens;
    std::size_t i = 0;
    while (i < toks.size()) {
      std::size_t matched = 0;
      for (std::size_t len = std::min(longest, toks.size() - i); len >= 1; --len) {
        const std::string s = underscore_join(Tokens(toks.begin() + static_cast<std::ptrdiff_t>(i),
                                                     toks.begin() + static_cast<std::ptrdiff_t>(i + len)));
        if (entity_vocabulary.count(s)) {
          if (std::none_of(out.begin(), out.end(), [&](const KeyTerm& t) { return t.surface == s; }))
            out.push_back({s, TermKind::kIngredient, 0.0});
          matched = len;
          break;
        }
      }
      i += matched ? matched : 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// part of speech

PosTagger::PosTagger() {
  nouns_.insert(lexicon::utensils().begin(), lexicon::utensils().end());
  for (const char* w : {"fork", "spoon", "lid", "cutter", "grater", "jar", "plate", "foil", "paper", "towel"})
    nouns_.insert(w);
  verbs_.insert(lexicon::actions().begin(), lexicon::actions().end());
  for (const char* w : {"add", "cook", "transfer", "place", "serve", "cover", "remove", "cool", "let", "bring",
                        "reduce", "drizzle", "sprinkle", "whisk", "grill", "beat", "cut", "melt", "wash", "rinse"})
    verbs_.insert(w);
  other_.insert(lexicon::function_words().begin(), lexicon::function_words().end());
  other_.insert(lexicon::descriptors().begin(), lexicon::descriptors().end());
}

PartOfSpeech PosTagger::tag(const std::string& token) const {
  if (other_.count(token)) return PartOfSpeech::kOther;
  if (verbs_.count(token)) return PartOfSpeech::kVerb;
  if (nouns_.count(token)) return PartOfSpeech::kNoun;
  auto ends_with = [&token](std::string_view suffix) {
    return token.size() > suffix.size() + 1 && token.compare(token.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  for (std::string_view s : {"ate", "ize", "ise", "ify", "ed", "ing"})
    if (ends_with(s)) return PartOfSpeech::kVerb;
  for (std::string_view s : {"pot", "pan", "ware", "er"})
    if (ends_with(s)) return PartOfSpeech::kNoun;
  return PartOfSpeech::kOther;
}

std::vector<KeyTerm> extract_utensils_actions(const Tokens& text) {
  static const PosTagger pos;
  std::vector<KeyTerm> out;
  for (const auto& tok : text) {
    if (tok.empty() || tok.find('_') != std::string::npos) continue;
    if (!std::isalpha(static_cast<unsigned char>(tok[0]))) continue;
    const PartOfSpeech p = pos.tag(tok);
    if (p == PartOfSpeech::kOther) continue;
    const TermKind kind = p == PartOfSpeech::kNoun ? TermKind::kUtensil : TermKind::kAction;
    if (std::none_of(out.begin(), out.end(), [&](const KeyTerm& t) { return t.surface == tok && t.kind == kind; }))
      out.push_back({tok, kind, 0.0});
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<CandidateSpan> clustered_candidates(const corpus::Recipe& recipe, const SequenceTagger& tagger,
                                                const CandidateClusterer& clusterer) {
  std::vector<CandidateSpan> all;
  for (std::size_t l = 0; l < recipe.ingredient_lines.size(); ++l) {
    auto c = extract_candidates(tagger, recipe.ingredient_lines[l], static_cast<int>(l));
    all.insert(all.end(), c.begin(), c.end());
  }
  return clusterer.cluster(std::move(all));
}

std::set<std::string> build_entity_vocabulary(const std::vector<corpus::RecipePair>& pairs,
                                              const SequenceTagger& tagger, const CandidateClusterer& clusterer) {
  std::set<std::string> vocab;
  for (const auto& p : pairs)
    for (const auto& c : clustered_candidates(p.recipe, tagger, clusterer))
      if (c.label == SpanLabel::kTrue) vocab.insert(c.surface());
  return vocab;
}

KeyTermExtractor train_extractor(const std::vector<corpus::RecipePair>& train_pairs,
                                 const std::vector<corpus::RecipePair>& vocabulary_pairs,
                                 const ExtractorConfig& config) {
  KeyTermExtractor ex;
  ex.tagger = train_ingredient_tagger(annotate_lines(train_pairs), config.tagger);

  std::vector<CandidateSpan> candidates;
  std::vector<int> labels;
  for (const auto& p : train_pairs) {
    for (std::size_t l = 0; l < p.recipe.ingredient_lines.size(); ++l) {
      for (auto& c : extract_candidates(ex.tagger, p.recipe.ingredient_lines[l], static_cast<int>(l))) {
        const int end = c.begin + static_cast<int>(c.tokens.size());
        const bool exact = std::any_of(p.spans.begin(), p.spans.end(), [&](const corpus::IngredientSpan& s) {
          return s.line == static_cast<int>(l) && s.begin == c.begin && s.end == end;
        });
        labels.push_back(exact ? 1 : 0);
        candidates.push_back(std::move(c));
      }
    }
  }
  ex.clusterer.set_frequencies(candidates);
  // A well-trained tagger proposes almost no false spans, so the regression
  // also sees the non-entity token runs of each line as negatives.
  for (const auto& p : train_pairs) {
    for (std::size_t l = 0; l < p.recipe.ingredient_lines.size(); ++l) {
      const Tokens& line = p.recipe.ingredient_lines[l];
      const std::vector<double> probs = ex.tagger.predict(line);
      std::vector<char> inside(line.size(), 0);
      for (const auto& s : p.spans)
        if (s.line == static_cast<int>(l))
          for (int t = s.begin; t < s.end; ++t) inside[static_cast<std::size_t>(t)] = 1;
      for (std::size_t t = 0; t < line.size();) {
        if (inside[t]) {
          ++t;
          continue;
        }
        CandidateSpan run;
        run.source_line = static_cast<int>(l);
        run.begin = static_cast<int>(t);
        double sum = 0.0;
        for (; t < line.size() && !inside[t]; ++t) {
          run.tokens.push_back(line[t]);
          sum += probs[t];
        }
        run.probability = sum / static_cast<double>(run.tokens.size());
        candidates.push_back(std::move(run));
        labels.push_back(0);
      }
    }
  }
  ex.clusterer.fit(candidates, labels);
  ex.entity_vocabulary = build_entity_vocabulary(vocabulary_pairs, ex.tagger, ex.clusterer);
  return ex;
}

KeyTermSet extract_key_terms(const corpus::Recipe& recipe, const SequenceTagger& tagger,
                             const CandidateClusterer& clusterer, const std::set<std::string>& entity_vocabulary) {
  KeyTermSet set;
  set.recipe_id = recipe.id;
  std::vector<CandidateSpan> false_spans;
  for (const auto& c : clustered_candidates(recipe, tagger, clusterer)) {
    if (c.label == SpanLabel::kTrue)
      set.add({c.surface(), TermKind::kIngredient, 0.0});
    else
      false_spans.push_back(c);
  }
  for (auto& t : reexamine_false_sequences(false_spans, entity_vocabulary)) set.add(std::move(t));

  std::set<std::string> remove = entity_vocabulary;
  for (const auto& t : set.terms) remove.insert(t.surface);
  const EntityJoiner joiner(remove);
  const Tokens masked = joiner.mask(recipe.full_text(), kIngredientPlaceholder);
  for (auto& t : extract_utensils_actions(masked)) {
    // ingredient kind wins when a surface was also extracted as an ingredient
    if (set.contains(t.surface, TermKind::kIngredient)) continue;
    set.add(std::move(t));
  }
  return set;
}

KeyTermSet extract_key_terms(const corpus::Recipe& recipe, const KeyTermExtractor& extractor) {
  return extract_key_terms(recipe, extractor.tagger, extractor.clusterer, extractor.entity_vocabulary);
}

void KeyTermExtractor::save(const std::filesystem::path& path) const {
  Checkpoint ckpt;
  ckpt.set_meta("kind", "key_term_extractor");
  tagger.save(ckpt, "tagger/");
  clusterer.save(ckpt, "clusterer/");
  ckpt.set_meta("entity_vocabulary", join(Tokens(entity_vocabulary.begin(), entity_vocabulary.end()), "\n"));
  ckpt.save(path);
}

KeyTermExtractor KeyTermExtractor::load(const std::filesystem::path& path) {
  const Checkpoint ckpt = Checkpoint::load(path);
  KeyTermExtractor ex;
  ex.tagger = SequenceTagger::load(ckpt, "tagger/");
  ex.clusterer = CandidateClusterer::load(ckpt, "clusterer/");
  std::istringstream ss(ckpt.meta("entity_vocabulary"));
  for (std::string w; std::getline(ss, w);)
    if (!w.empty()) ex.entity_vocabulary.insert(w);
  return ex;
}

SpanScore score_spans(const SequenceTagger& tagger, const std::vector<corpus::RecipePair>& pairs) {
  std::size_t predicted = 0, actual = 0, hits = 0;
  for (const auto& p : pairs) {
    actual += p.spans.size();
    for (std::size_t l = 0; l < p.recipe.ingredient_lines.size(); ++l) {
      for (const auto& c : extract_candidates(tagger, p.recipe.ingredient_lines[l], static_cast<int>(l))) {
        ++predicted;
        const int end = c.begin + static_cast<int>(c.tokens.size());
        if (std::any_of(p.spans.begin(), p.spans.end(), [&](const corpus::IngredientSpan& s) {
              return s.line == static_cast<int>(l) && s.begin == c.begin && s.end == end;
            }))
          ++hits;
      }
    }
  }
  SpanScore s;
  s.precision = predicted ? static_cast<double>(hits) / static_cast<double>(predicted) : 0.0;
  s.recall = actual ? static_cast<double>(hits) / static_cast<double>(actual) : 0.0;
  s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

}  // namespace seje::terms
