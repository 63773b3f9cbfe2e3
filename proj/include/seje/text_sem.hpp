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
#include <string>
#include <vector>

#include "seje/adam.hpp"
#include "seje/checkpoint.hpp"
#include "seje/corpus.hpp"
#include "seje/nn.hpp"
#include "seje/term_extract.hpp"
#include "seje/text.hpp"

namespace seje::textsem {

/// Token -> dense vector lookup produced by CBOW training.
class WordEmbeddingTable {
 public:
  static constexpr std::uint32_t kVersion = 1;

  WordEmbeddingTable() = default;
  WordEmbeddingTable(std::vector<std::string> vocabulary, Matrix matrix, std::uint64_t seed);

  int dim() const { return static_cast<int>(matrix_.cols()); }
  std::size_t size() const { return vocabulary_.size(); }
  bool contains(const std::string& token) const { return index_.count(token) > 0; }
  std::optional<Vector> row(const std::string& token) const;
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const Matrix& matrix() const { return matrix_; }
  std::uint64_t seed() const { return seed_; }

  /// Binary blob: magic, version, seed, d_w, vocabulary, row-major doubles.
  void save(const std::filesystem::path& path) const;
  static WordEmbeddingTable load(const std::filesystem::path& path);

  bool operator==(const WordEmbeddingTable& o) const;

 private:
  std::vector<std::string> vocabulary_;
  std::map<std::string, Index> index_;
  Matrix matrix_;
  std::uint64_t seed_ = 0;
};

struct CbowConfig {
  int dim = 300;
  int window = 4;
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.05;
  std::uint64_t seed = 1;
};

struct CbowResult {
  WordEmbeddingTable table;
  std::vector<double> epoch_losses;
};

/// Negative-sampling CBOW. Entity surfaces should already be underscore-joined.
CbowResult train_cbow(const std::vector<Tokens>& texts, const CbowConfig& config);

/// Exact row, else mean of the known constituent rows, else zeros (warned).
Vector embed_term(const WordEmbeddingTable& table, const std::string& surface);

/// sum_t weight(t) * embed(t).
Vector key_term_feature(const terms::KeyTermSet& set, const WordEmbeddingTable& table);

// ---------------------------------------------------------------------------

struct SentenceEncoderConfig {
  int dim = 128;  // d_s
  int embedding_dim = 32;
  int decoder_hidden = 64;
  int epochs = 10;
  int batch_size = 8;
  double learning_rate = 0.005;
  std::uint64_t seed = 1;
};

/// LSTM sentence encoder trained as an autoencoder whose code also has to
/// decode the previous and next sentence of the same recipe.
class SentenceEncoder {
 public:
  SentenceEncoder() = default;
  SentenceEncoder(std::vector<std::string> vocabulary, const SentenceEncoderConfig& config);

  int dim() const { return config_.dim; }
  Vector encode(const Tokens& sentence) const;

  /// Teacher-forced next-token accuracy of the self decoder (end marker included).
  double reconstruction_accuracy(const std::vector<Tokens>& sentences) const;

  /// Loss for one sentence with optional neighbours; accumulates gradients.
  double train_step(const Tokens& sentence, const Tokens* previous, const Tokens* next);

  nn::ParamRefs params();
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }
  const SentenceEncoderConfig& config() const { return config_; }

  void save(const std::filesystem::path& path) const;
  static SentenceEncoder load(const std::filesystem::path& path);

 private:
  friend SentenceEncoder train_sentence_encoder(const std::vector<std::vector<Tokens>>&, const SentenceEncoderConfig&);

  struct Decoder {
    nn::Linear init;
    nn::Lstm lstm;
    nn::Linear output;
  };

  std::vector<Index> ids(const Tokens& sentence) const;
  nn::LstmTrace encode_trace(const std::vector<Index>& ids) const;
  /// Previous-token embedding concatenated with the sentence code; every
  /// decoder step is conditioned on the code.
  Vector decoder_input(Index token, const Vector& code) const;
  /// Returns the summed cross-entropy; with `dcode` set, accumulates decoder
  /// and embedding gradients and adds dL/dcode.
  double decode(Decoder& dec, const Vector& code, const std::vector<Index>& target, Vector* dcode,
                std::size_t* correct) ;
  double decode_eval(const Decoder& dec, const Vector& code, const std::vector<Index>& target,
                     std::size_t* correct) const;

  SentenceEncoderConfig config_;
  std::vector<std::string> vocabulary_;  // 0 = <unk>, 1 = <eos>
  std::map<std::string, Index> index_;
  nn::Embedding embedding_;
  nn::Lstm encoder_;
  Decoder self_;
  Decoder previous_;
  Decoder next_;
  std::vector<double> epoch_losses_;
};

/// `recipes` holds the instruction sentences of each recipe, in order.
SentenceEncoder train_sentence_encoder(const std::vector<std::vector<Tokens>>& recipes,
                                       const SentenceEncoderConfig& config);

/// One vector per instruction sentence, order preserved.
std::vector<Vector> encode_instructions(const SentenceEncoder& encoder, const corpus::Recipe& recipe);

}  // namespace seje::textsem
