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

#include "seje/text_sem.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace seje::textsem {

WordEmbeddingTable::WordEmbeddingTable(std::vector<std::string> vocabulary, Matrix matrix, std::uint64_t seed)
    : vocabulary_(std::move(vocabulary)), matrix_(std::move(matrix)), seed_(seed) {
  if (static_cast<Index>(vocabulary_.size()) != matrix_.rows())
    throw Error("embedding table: vocabulary size does not match matrix rows");
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) index_[vocabulary_[i]] = static_cast<Index>(i);
}

std::optional<Vector> WordEmbeddingTable::row(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return Vector(matrix_.row(it->second).transpose());
}

bool WordEmbeddingTable::operator==(const WordEmbeddingTable& o) const {
  return vocabulary_ == o.vocabulary_ && seed_ == o.seed_ && matrix_.rows() == o.matrix_.rows() &&
         matrix_.cols() == o.matrix_.cols() && matrix_ == o.matrix_;
}

namespace {

constexpr char kTableMagic[8] = {'S', 'E', 'J', 'E', 'W', 'E', 'M', 'B'};

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T take(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw SchemaError("truncated embedding table");
  return v;
}

}  // namespace

void WordEmbeddingTable::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os.write(kTableMagic, sizeof(kTableMagic));
  put<std::uint32_t>(os, kVersion);
  put<std::uint64_t>(os, seed_);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(matrix_.cols()));
  put<std::uint64_t>(os, vocabulary_.size());
  for (const auto& w : vocabulary_) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(w.size()));
    os.write(w.data(), static_cast<std::streamsize>(w.size()));
  }
  for (Index r = 0; r < matrix_.rows(); ++r)
    for (Index c = 0; c < matrix_.cols(); ++c) put<double>(os, matrix_(r, c));
}

WordEmbeddingTable WordEmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path.string());
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kTableMagic, 8) != 0)
    throw SchemaError("not an embedding table: " + path.string());
  if (take<std::uint32_t>(is) != kVersion) throw SchemaError("unsupported embedding table version");
  const auto seed = take<std::uint64_t>(is);
  const auto dim = take<std::uint64_t>(is);
  const auto n = take<std::uint64_t>(is);
  std::vector<std::string> vocab;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto len = take<std::uint32_t>(is);
    std::string w(len, '\0');
    if (!is.read(w.data(), len)) throw SchemaError("truncated embedding table");
    vocab.push_back(std::move(w));
  }
  Matrix m(static_cast<Index>(n), static_cast<Index>(dim));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = take<double>(is);
  return WordEmbeddingTable(std::move(vocab), std::move(m), seed);
}

// ---------------------------------------------------------------------------

CbowResult train_cbow(const std::vector<Tokens>& texts, const CbowConfig& config) {
  std::map<std::string, std::size_t> counts;
  for (const auto& t : texts)
    for (const auto& w : t) ++counts[w];
  if (counts.size() < 2) throw ConfigError("CBOW needs a vocabulary of at least 2 tokens");
  if (config.dim < 1 || config.window < 1 || config.epochs < 1) throw ConfigError("invalid CBOW configuration");

  std::vector<std::string> vocab;
  std::map<std::string, Index> index;
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& [w, n] : counts) {
    index[w] = static_cast<Index>(vocab.size());
    vocab.push_back(w);
    acc += std::pow(static_cast<double>(n), 0.75);
    cumulative.push_back(acc);
  }
  for (double& c : cumulative) c /= acc;

  const Index V = static_cast<Index>(vocab.size());
  const Index d = config.dim;
  Rng init_rng(config.seed, 0xcb0);
  Matrix w_in(V, d);
  for (Index c = 0; c < d; ++c)
    for (Index r = 0; r < V; ++r) w_in(r, c) = init_rng.uniform(-0.5, 0.5) / static_cast<double>(d);
  Matrix w_out = Matrix::Zero(V, d);

  std::vector<std::vector<Index>> encoded;
  std::size_t total_positions = 0;
  for (const auto& t : texts) {
    std::vector<Index> ids;
    for (const auto& w : t) ids.push_back(index.at(w));
    total_positions += ids.size();
    encoded.push_back(std::move(ids));
  }

  CbowResult result;
  const double total_steps = static_cast<double>(total_positions) * config.epochs;
  double step = 0;
  std::vector<std::size_t> order(encoded.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Vector h(d), eh(d);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(config.seed, 0x1000 + static_cast<std::uint64_t>(epoch));
    rng.shuffle(order);
    double loss = 0.0;
    std::size_t events = 0;
    for (std::size_t oi : order) {
      const auto& ids = encoded[oi];
      const auto n = static_cast<std::ptrdiff_t>(ids.size());
      for (std::ptrdiff_t t = 0; t < n; ++t) {
        const double lr = config.learning_rate * std::max(1e-4, 1.0 - step / total_steps);
        ++step;
        h.setZero();
        int ctx = 0;
        for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(0, t - config.window);
             k <= std::min<std::ptrdiff_t>(n - 1, t + config.window); ++k) {
          if (k == t) continue;
          h += w_in.row(ids[static_cast<std::size_t>(k)]).transpose();
          ++ctx;
        }
        if (ctx == 0) continue;
        h /= ctx;
        eh.setZero();
        const Index target = ids[static_cast<std::size_t>(t)];
        for (int s = 0; s <= config.negatives; ++s) {
          Index j = target;
          double label = 1.0;
          if (s > 0) {
            const double u = rng.uniform();
            j = static_cast<Index>(std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
            j = std::min(j, V - 1);
            if (j == target) continue;
            label = 0.0;
          }
          const double score = w_out.row(j).dot(h);
          const double p = nn::sigmoid(score);
          loss += label > 0 ? nn::softplus(-score) : nn::softplus(score);
          const double g = (label - p) * lr;
          eh += g * w_out.row(j).transpose();
          w_out.row(j) += g * h.transpose();
        }
        ++events;
        for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(0, t - config.window);
             k <= std::min<std::ptrdiff_t>(n - 1, t + config.window); ++k) {
          if (k == t) continue;
          w_in.row(ids[static_cast<std::size_t>(k)]) += eh.transpose();
        }
      }
    }
    result.epoch_losses.push_back(events ? loss / static_cast<double>(events) : 0.0);
  }
  result.table = WordEmbeddingTable(std::move(vocab), std::move(w_in), config.seed);
  return result;
}

Vector embed_term(const WordEmbeddingTable& table, const std::string& surface) {
  if (auto r = table.row(surface)) return *r;
  Vector sum = Vector::Zero(table.dim());
  int known = 0;
  for (const auto& part : split_underscore(surface)) {
    if (auto r = table.row(part)) {
      sum += *r;
      ++known;
    }
  }
  if (known == 0) {
    spdlog::warn("embed_term: '{}' is unknown, using a zero vector", surface);
    return sum;
  }
  return sum / known;
}

Vector key_term_feature(const terms::KeyTermSet& set, const WordEmbeddingTable& table) {
  Vector out = Vector::Zero(table.dim());
  if (set.terms.empty()) {
    spdlog::warn("key_term_feature: recipe '{}' has no key terms", set.recipe_id);
    return out;
  }
  for (const auto& t : set.terms) out += t.weight * embed_term(table, t.surface);
  return out;
}

// ---------------------------------------------------------------------------

namespace {
constexpr Index kUnk = 0;
constexpr Index kEos = 1;
}  // namespace

SentenceEncoder::SentenceEncoder(std::vector<std::string> vocabulary, const SentenceEncoderConfig& config)
    : config_(config) {
  vocabulary_ = {"<unk>", "<eos>"};
  for (auto& w : vocabulary)
    if (w != "<unk>" && w != "<eos>") vocabulary_.push_back(std::move(w));
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) index_[vocabulary_[i]] = static_cast<Index>(i);
  Rng rng(config.seed, 0x5e7);
  const Index V = static_cast<Index>(vocabulary_.size());
  embedding_ = nn::Embedding("sent.embedding", V, config.embedding_dim, rng);
  encoder_ = nn::Lstm("sent.encoder", config.embedding_dim, config.dim, rng);
  auto make = [&](const std::string& name) {
    return Decoder{nn::Linear(name + ".init", config.dim, config.decoder_hidden, rng),
                   nn::Lstm(name + ".lstm", config.embedding_dim + config.dim, config.decoder_hidden, rng),
                   nn::Linear(name + ".output", config.decoder_hidden, V, rng)};
  };
  self_ = make("sent.self");
  previous_ = make("sent.previous");
  next_ = make("sent.next");
}

nn::ParamRefs SentenceEncoder::params() {
  nn::ParamRefs out = embedding_.params();
  for (auto* p : encoder_.params()) out.push_back(p);
  for (Decoder* d : {&self_, &previous_, &next_}) {
    for (auto* p : d->init.params()) out.push_back(p);
    for (auto* p : d->lstm.params()) out.push_back(p);
    for (auto* p : d->output.params()) out.push_back(p);
  }
  return out;
}

std::vector<Index> SentenceEncoder::ids(const Tokens& sentence) const {
  std::vector<Index> out;
  out.reserve(sentence.size());
  for (const auto& w : sentence) {
    auto it = index_.find(w);
    out.push_back(it == index_.end() ? kUnk : it->second);
  }
  return out;
}

nn::LstmTrace SentenceEncoder::encode_trace(const std::vector<Index>& token_ids) const {
  std::vector<Vector> xs;
  xs.reserve(token_ids.size() + 1);
  for (Index id : token_ids) xs.push_back(embedding_.lookup(id));
  if (xs.empty()) xs.push_back(embedding_.lookup(kEos));
  return encoder_.forward(xs);
}

Vector SentenceEncoder::decoder_input(Index token, const Vector& code) const {
  Vector x(embedding_.dim() + code.size());
  x << embedding_.lookup(token), code;
  return x;
}

Vector SentenceEncoder::encode(const Tokens& sentence) const { return encode_trace(ids(sentence)).hidden.back(); }

double SentenceEncoder::decode_eval(const Decoder& dec, const Vector& code, const std::vector<Index>& target,
                                    std::size_t* correct) const {
  const Vector h0 = dec.init.forward(code).array().tanh().matrix();
  std::vector<Vector> xs;
  xs.push_back(decoder_input(kEos, code));
  for (Index id : target) xs.push_back(decoder_input(id, code));
  const nn::LstmTrace tr = dec.lstm.forward(xs, h0, Vector::Zero(h0.size()));
  double loss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const Index y = k < target.size() ? target[k] : kEos;
    const Vector p = nn::softmax(dec.output.forward(tr.hidden[k]));
    loss -= std::log(std::max(p[y], 1e-300));
    if (correct && nn::argmax(p) == y) ++*correct;
  }
  return loss;
}

double SentenceEncoder::decode(Decoder& dec, const Vector& code, const std::vector<Index>& target, Vector* dcode,
                               std::size_t* correct) {
  const Vector pre = dec.init.forward(code);
  const Vector h0 = pre.array().tanh().matrix();
  std::vector<Index> in_ids;
  in_ids.push_back(kEos);
  in_ids.insert(in_ids.end(), target.begin(), target.end());
  std::vector<Vector> xs;
  for (Index id : in_ids) xs.push_back(decoder_input(id, code));
  const nn::LstmTrace tr = dec.lstm.forward(xs, h0, Vector::Zero(h0.size()));
  double loss = 0.0;
  std::vector<Vector> dh(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const Index y = k < target.size() ? target[k] : kEos;
    Vector p = nn::softmax(dec.output.forward(tr.hidden[k]));
    loss -= std::log(std::max(p[y], 1e-300));
    if (correct && nn::argmax(p) == y) ++*correct;
    p[y] -= 1.0;
    dh[k] = dec.output.backward(tr.hidden[k], p);
  }
  const nn::LstmGrads g = dec.lstm.backward(tr, dh);
  const Index E = embedding_.dim();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    embedding_.backward(in_ids[k], g.inputs[k].head(E));
    *dcode += g.inputs[k].tail(code.size());
  }
  const Vector dpre = g.h0.cwiseProduct((1.0 - h0.array().square()).matrix());
  *dcode += dec.init.backward(code, dpre);
  return loss;
}

double SentenceEncoder::train_step(const Tokens& sentence, const Tokens* previous, const Tokens* next) {
  const std::vector<Index> src = ids(sentence);
  const nn::LstmTrace tr = encode_trace(src);
  const Vector code = tr.hidden.back();
  Vector dcode = Vector::Zero(code.size());
  double loss = decode(self_, code, src, &dcode, nullptr);
  if (previous) loss += decode(previous_, code, ids(*previous), &dcode, nullptr);
  if (next) loss += decode(next_, code, ids(*next), &dcode, nullptr);
  std::vector<Vector> dh(tr.hidden.size(), Vector::Zero(code.size()));
  dh.back() = dcode;
  const nn::LstmGrads g = encoder_.backward(tr, dh);
  if (src.empty()) {
    embedding_.backward(kEos, g.inputs[0]);
  } else {
    for (std::size_t k = 0; k < src.size(); ++k) embedding_.backward(src[k], g.inputs[k]);
  }
  return loss;
}

double SentenceEncoder::reconstruction_accuracy(const std::vector<Tokens>& sentences) const {
  std::size_t correct = 0, total = 0;
  for (const auto& s : sentences) {
    const std::vector<Index> src = ids(s);
    decode_eval(self_, encode_trace(src).hidden.back(), src, &correct);
    total += src.size() + 1;
  }
  return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

void SentenceEncoder::save(const std::filesystem::path& path) const {
  Checkpoint ckpt;
  ckpt.set_meta("kind", "sentence_encoder");
  ckpt.set_meta("vocabulary", join(vocabulary_, "\n"));
  ckpt.set_meta("dim", std::to_string(config_.dim));
  ckpt.set_meta("embedding_dim", std::to_string(config_.embedding_dim));
  ckpt.set_meta("decoder_hidden", std::to_string(config_.decoder_hidden));
  ckpt.set_meta("seed", std::to_string(config_.seed));
  ckpt.put_params(const_cast<SentenceEncoder*>(this)->params());
  ckpt.save(path);
}

SentenceEncoder SentenceEncoder::load(const std::filesystem::path& path) {
  const Checkpoint ckpt = Checkpoint::load(path);
  SentenceEncoderConfig cfg;
  cfg.dim = std::stoi(ckpt.meta("dim"));
  cfg.embedding_dim = std::stoi(ckpt.meta("embedding_dim"));
  cfg.decoder_hidden = std::stoi(ckpt.meta("decoder_hidden"));
  cfg.seed = std::stoull(ckpt.meta("seed"));
  std::vector<std::string> vocab;
  std::istringstream ss(ckpt.meta("vocabulary"));
  for (std::string w; std::getline(ss, w);) vocab.push_back(w);
  SentenceEncoder enc(vocab, cfg);
  ckpt.get_params(enc.params());
  return enc;
}

SentenceEncoder train_sentence_encoder(const std::vector<std::vector<Tokens>>& recipes,
                                       const SentenceEncoderConfig& config) {
  struct Item {
    const Tokens* sentence;
    const Tokens* previous;
    const Tokens* next;
  };
  std::vector<Item> items;
  std::set<std::string> words;
  for (const auto& r : recipes) {
    for (std::size_t s = 0; s < r.size(); ++s) {
      items.push_back({&r[s], s > 0 ? &r[s - 1] : nullptr, s + 1 < r.size() ? &r[s + 1] : nullptr});
      words.insert(r[s].begin(), r[s].end());
    }
  }
  if (items.empty()) throw ConfigError("sentence encoder training corpus is empty");
  SentenceEncoder enc(std::vector<std::string>(words.begin(), words.end()), config);
  Adam adam(enc.params(), AdamConfig{config.learning_rate});
  const std::size_t batch = static_cast<std::size_t>(std::max(1, config.batch_size));
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(config.seed, 0x2000 + static_cast<std::uint64_t>(epoch));
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      adam.zero_grad();
      for (std::size_t k = start; k < std::min(order.size(), start + batch); ++k) {
        const Item& it = items[order[k]];
        total += enc.train_step(*it.sentence, it.previous, it.next);
      }
      adam.step();
    }
    enc.epoch_losses_.push_back(total / static_cast<double>(items.size()));
  }
  return enc;
}

std::vector<Vector> encode_instructions(const SentenceEncoder& encoder, const corpus::Recipe& recipe) {
  std::vector<Vector> out;
  out.reserve(recipe.instructions.size());
  for (const auto& s : recipe.instructions) out.push_back(encoder.encode(s));
  return out;
}

}  // namespace seje::textsem
