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
#include <optional>
#include <string>
#include <vector>

#include "seje/adam.hpp"
#include "seje/config.hpp"
#include "seje/encoders.hpp"
#include "seje/evalkit.hpp"
#include "seje/losses.hpp"

namespace seje::trainer {

/// Phase II input for one recipe-image pair.
struct PreparedPair {
  std::string id;
  std::vector<Vector> sentences;  // one d_s vector per instruction
  Vector key_term_feature;        // d_w
  Matrix pixels;                  // 3 x (H * W)
  Vector category_vector;         // d_w, from the predicted image category
  int category = 0;
};

struct TrainConfig {
  int epochs = 20;
  int batch_size = 16;
  double learning_rate = 1e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 1;
  int disc_steps = 1;

  bool use_batch_all = false;
  bool use_hard_negatives_single_constraint = false;
  bool use_ca = true;
  bool use_ca_original_labels = false;
  bool use_da = true;
  bool use_cal_v = true;
  bool use_cal_r = true;

  losses::LossConfig loss;
  encoders::JointConfig joint;

  void validate() const;
  /// Reads every known key; unknown keys are left for the caller to reject.
  void apply(const KeyValueConfig& kv);
  std::string to_text() const;
};

/// Encoders, discriminator and the two linear category heads.
class JointModel {
 public:
  JointModel() = default;
  JointModel(const TrainConfig& config, int num_classes);

  /// Inputs are zeroed where the Cal_R / Cal_V switches are off.
  Vector embed_recipe(const PreparedPair& p, encoders::RecipeTrace* trace = nullptr) const;
  Vector embed_image(const PreparedPair& p, encoders::ImageTrace* trace = nullptr) const;

  nn::ParamRefs encoder_params();
  nn::ParamRefs disc_params() { return disc.params(); }
  nn::ParamRefs all_params();

  int num_classes() const { return static_cast<int>(recipe_head.out()); }

  encoders::RecipeEncoder recipe;
  encoders::ImageEncoder image;
  encoders::Discriminator disc;
  nn::Linear recipe_head;
  nn::Linear image_head;
  bool use_cal_v = true;
  bool use_cal_r = true;
};

struct Embeddings {
  Matrix recipes;
  Matrix images;
};

Embeddings embed_all(const JointModel& model, const std::vector<PreparedPair>& pairs);

/// Image-to-recipe MedR over the whole set.
double validation_medr(const JointModel& model, const std::vector<PreparedPair>& pairs);

struct EpochRecord {
  int epoch = 0;
  double mean_total = 0.0;
  double val_medr = 0.0;
};

/// Alternating discriminator / encoder optimisation with resumable state.
/// Each epoch draws its shuffle and interpolation noise from streams keyed by
/// (seed, epoch), so state at an epoch boundary fully determines the rest.
class Trainer {
 public:
  Trainer(const TrainConfig& config, int num_categories);
  // The optimisers hold pointers into model_, so copies rebind them.
  Trainer(const Trainer& o);
  Trainer(Trainer&& o) noexcept;
  Trainer& operator=(const Trainer& o);
  Trainer& operator=(Trainer&& o) noexcept;

  /// Runs one epoch; throws DivergenceError on a non-finite loss.
  void run_epoch(const std::vector<PreparedPair>& train, const std::vector<PreparedPair>& val);
  void run(const std::vector<PreparedPair>& train, const std::vector<PreparedPair>& val);

  int epoch() const { return epoch_; }
  const TrainConfig& config() const { return config_; }
  void set_epochs(int epochs) { config_.epochs = epochs; }
  const std::vector<losses::LossBundle>& losses() const { return losses_; }
  const std::vector<EpochRecord>& history() const { return history_; }
  const JointModel& model() const { return model_; }
  JointModel& model() { return model_; }
  /// Parameters of the epoch with the lowest validation MedR.
  JointModel best_model() const;
  double best_val_medr() const { return best_medr_; }
  int best_epoch() const { return best_epoch_; }
  std::optional<double> initial_val_medr() const { return initial_medr_; }

  /// Class label used by the category heads for pair `p`.
  int head_label(const PreparedPair& p) const;

  /// Embeddings of one batch with the traces needed for the encoder step.
  struct BatchForward {
    std::vector<const PreparedPair*> pairs;
    losses::EmbeddingBatch embeddings;
    std::vector<encoders::RecipeTrace> recipe_traces;
    std::vector<encoders::ImageTrace> image_traces;
  };

  BatchForward forward_batch(const std::vector<const PreparedPair*>& batch) const;
  /// Minimises L_D over the discriminator only; returns the last L_D.
  double discriminator_step(const BatchForward& fwd, Rng& noise);
  /// Minimises L_TRI + lambda1 L_CA + lambda2 L_DA over encoders and heads.
  losses::LossBundle encoder_step(const BatchForward& fwd, double l_d);
  /// forward_batch, discriminator_step, encoder_step.
  losses::LossBundle train_batch(const std::vector<const PreparedPair*>& batch, Rng& noise);

  void save_state(const std::filesystem::path& path) const;
  static Trainer load_state(const std::filesystem::path& path);

  /// JSONL loss records, one per step.
  void write_loss_log(const std::filesystem::path& path) const;

 private:
  void rebind_optimisers();

  TrainConfig config_;
  int num_categories_ = 0;
  JointModel model_;
  Adam enc_adam_;
  Adam disc_adam_;
  int epoch_ = 0;
  std::vector<losses::LossBundle> losses_;
  std::vector<EpochRecord> history_;
  std::vector<Matrix> best_params_;
  double best_medr_ = 0.0;
  int best_epoch_ = -1;
  std::optional<double> initial_medr_;
};

struct SavedModel {
  TrainConfig config;
  int num_categories = 0;
  JointModel model;
};

void save_model(const std::filesystem::path& path, const JointModel& model, const TrainConfig& config,
                int num_categories);
SavedModel load_model(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

/// One ablation row: a base name "SEJE-b" plus '+'-separated components from
/// {Cal_V, Cal_R, P I, CA(-), CA, DA, TRI(-), TRI, P II}.
struct AblationRow {
  std::string name;
  TrainConfig config;
};

/// Applies a row name's components to `base` with every switch first reset to
/// the batch-all, uncalibrated baseline.
AblationRow ablation_row(const std::string& name, const TrainConfig& base);

/// The ten standard ablation rows, from the batch-all baseline to the full model.
std::vector<std::string> standard_ablation_rows();

struct AblationResult {
  std::string name;
  eval::ProtocolReport report;
  double best_val_medr = 0.0;
};

struct AblationTable {
  std::vector<AblationResult> rows;

  std::string to_json() const;
  std::string to_markdown() const;
};

AblationTable run_ablation(const std::vector<std::string>& rows, const TrainConfig& base,
                           const std::vector<PreparedPair>& train, const std::vector<PreparedPair>& val,
                           const std::vector<PreparedPair>& test, int num_categories, int subset_size, int trials);

}  // namespace seje::trainer
