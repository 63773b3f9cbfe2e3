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
#include <string>
#include <vector>

#include "seje/corpus.hpp"
#include "seje/nn.hpp"
#include "seje/text_sem.hpp"

namespace seje::imagesem {

struct ClassifierConfig {
  std::vector<int> channels = {8, 16, 16};
  int epochs = 8;
  int batch_size = 16;
  double learning_rate = 3e-3;
  std::uint64_t seed = 1;
};

struct Prediction {
  int index = 0;
  std::string label;
  double confidence = 0.0;
};

/// Small convolutional image category classifier.
class CategoryClassifier {
 public:
  CategoryClassifier() = default;
  CategoryClassifier(std::vector<std::string> labels, nn::Shape2d input, const ClassifierConfig& config);

  int num_classes() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const nn::Shape2d& input_shape() const { return backbone_.input_shape(); }

  /// Softmax class probabilities; throws on a resolution mismatch.
  Vector probabilities(const Matrix& pixels) const;
  /// Cross-entropy of one example; accumulates gradients.
  double train_example(const Matrix& pixels, int label);
  double accuracy(const std::vector<corpus::FoodImage>& images) const;

  nn::ParamRefs params();
  double validation_accuracy() const { return validation_accuracy_; }
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }

  void save(const std::filesystem::path& path) const;
  static CategoryClassifier load(const std::filesystem::path& path);

 private:
  friend CategoryClassifier train_category_classifier(const std::vector<corpus::FoodImage>&,
                                                      const std::vector<corpus::FoodImage>&,
                                                      const corpus::CategoryVocabulary&, const ClassifierConfig&);

  void check_shape(const Matrix& pixels) const;

  std::vector<std::string> labels_;
  ClassifierConfig config_;
  nn::ConvBackbone backbone_;
  nn::Linear head_;
  double validation_accuracy_ = 0.0;
  std::vector<double> epoch_losses_;
};

/// Cross-entropy training; `validation` may be empty.
CategoryClassifier train_category_classifier(const std::vector<corpus::FoodImage>& train,
                                             const std::vector<corpus::FoodImage>& validation,
                                             const corpus::CategoryVocabulary& categories,
                                             const ClassifierConfig& config);

/// Argmax label and its probability (ties go to the lowest class index).
Prediction predict_category(const CategoryClassifier& classifier, const Matrix& pixels);

/// Word vector of a category label; same code path as embed_term.
Vector category_embedding(const std::string& label, const textsem::WordEmbeddingTable& table);

}  // namespace seje::imagesem
