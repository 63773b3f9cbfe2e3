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

#include "seje/image_sem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "seje/adam.hpp"
#include "seje/checkpoint.hpp"

namespace seje::imagesem {

CategoryClassifier::CategoryClassifier(std::vector<std::string> labels, nn::Shape2d input,
                                       const ClassifierConfig& config)
    : labels_(std::move(labels)), config_(config) {
  Rng rng(config.seed, 0xc1a55);
  backbone_ = nn::ConvBackbone("classifier.backbone", input, config.channels, rng);
  head_ = nn::Linear("classifier.head", backbone_.feature_size(), static_cast<Index>(labels_.size()), rng);
}

nn::ParamRefs CategoryClassifier::params() {
  nn::ParamRefs out = backbone_.params();
  for (auto* p : head_.params()) out.push_back(p);
  return out;
}

void CategoryClassifier::check_shape(const Matrix& pixels) const {
  const nn::Shape2d& s = backbone_.input_shape();
  if (pixels.rows() != s.channels || pixels.cols() != static_cast<Index>(s.height) * s.width)
    throw Error("classifier expects " + std::to_string(s.channels) + "x" + std::to_string(s.height) + "x" +
                std::to_string(s.width) + " images");
}

Vector CategoryClassifier::probabilities(const Matrix& pixels) const {
  check_shape(pixels);
  return nn::softmax(head_.forward(backbone_.forward(pixels, nullptr)));
}

double CategoryClassifier::train_example(const Matrix& pixels, int label) {
  check_shape(pixels);
  nn::ConvTrace trace;
  const Vector feature = backbone_.forward(pixels, &trace);
  Vector p = nn::softmax(head_.forward(feature));
  const double loss = -std::log(std::max(p[label], 1e-300));
  p[label] -= 1.0;
  backbone_.backward(trace, head_.backward(feature, p));
  return loss;
}

double CategoryClassifier::accuracy(const std::vector<corpus::FoodImage>& images) const {
  if (images.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& im : images)
    if (labels_[static_cast<std::size_t>(nn::argmax(probabilities(im.pixels)))] == im.category) ++hits;
  return static_cast<double>(hits) / static_cast<double>(images.size());
}

void CategoryClassifier::save(const std::filesystem::path& path) const {
  Checkpoint ckpt;
  ckpt.set_meta("kind", "category_classifier");
  std::string labels;
  for (const auto& l : labels_) labels += l + "\n";
  ckpt.set_meta("labels", labels);
  const nn::Shape2d& s = backbone_.input_shape();
  ckpt.set_meta("input", std::to_string(s.channels) + " " + std::to_string(s.height) + " " + std::to_string(s.width));
  std::string ch;
  for (int c : config_.channels) ch += std::to_string(c) + " ";
  ckpt.set_meta("channels", ch);
  ckpt.set_meta("validation_accuracy", std::to_string(validation_accuracy_));
  ckpt.put_params(const_cast<CategoryClassifier*>(this)->params());
  ckpt.save(path);
}

CategoryClassifier CategoryClassifier::load(const std::filesystem::path& path) {
  const Checkpoint ckpt = Checkpoint::load(path);
  std::vector<std::string> labels;
  std::istringstream ls(ckpt.meta("labels"));
  for (std::string l; std::getline(ls, l);)
    if (!l.empty()) labels.push_back(l);
  nn::Shape2d shape;
  std::istringstream is(ckpt.meta("input"));
  is >> shape.channels >> shape.height >> shape.width;
  ClassifierConfig cfg;
  cfg.channels.clear();
  std::istringstream cs(ckpt.meta("channels"));
  for (int c; cs >> c;) cfg.channels.push_back(c);
  CategoryClassifier clf(std::move(labels), shape, cfg);
  ckpt.get_params(clf.params());
  clf.validation_accuracy_ = std::stod(ckpt.meta("validation_accuracy"));
  return clf;
}

CategoryClassifier train_category_classifier(const std::vector<corpus::FoodImage>& train,
                                             const std::vector<corpus::FoodImage>& validation,
                                             const corpus::CategoryVocabulary& categories,
                                             const ClassifierConfig& config) {
  if (train.empty()) throw ConfigError("classifier training set is empty");
  std::map<std::string, int> per_class;
  for (const auto& im : train) ++per_class[im.category];
  if (per_class.size() < 2) throw ConfigError("classifier needs at least 2 classes");
  for (const auto& [label, n] : per_class)
    if (n < 5) throw ConfigError("classifier needs at least 5 images of class '" + label + "'");

  const nn::Shape2d shape{3, train.front().height, train.front().width};
  CategoryClassifier clf(categories.labels(), shape, config);
  Adam adam(clf.params(), AdamConfig{config.learning_rate});
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t batch = static_cast<std::size_t>(std::max(1, config.batch_size));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(config.seed, 0x3000 + static_cast<std::uint64_t>(epoch));
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      adam.zero_grad();
      const std::size_t stop = std::min(order.size(), start + batch);
      for (std::size_t k = start; k < stop; ++k) {
        const auto& im = train[order[k]];
        total += clf.train_example(im.pixels, categories.index(im.category));
      }
      for (auto* p : clf.params()) p->grad /= static_cast<double>(stop - start);
      adam.step();
    }
    clf.epoch_losses_.push_back(total / static_cast<double>(train.size()));
  }
  clf.validation_accuracy_ = validation.empty() ? clf.accuracy(train) : clf.accuracy(validation);
  return clf;
}

Prediction predict_category(const CategoryClassifier& classifier, const Matrix& pixels) {
  const Vector p = classifier.probabilities(pixels);
  const Index k = nn::argmax(p);
  return {static_cast<int>(k), classifier.labels()[static_cast<std::size_t>(k)], p[k]};
}

Vector category_embedding(const std::string& label, const textsem::WordEmbeddingTable& table) {
  return textsem::embed_term(table, label);
}

}  // namespace seje::imagesem
