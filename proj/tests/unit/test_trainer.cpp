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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "prepared.hpp"
#include "seje/trainer.hpp"

namespace seje::trainer {
namespace {

namespace fs = std::filesystem;
using seje::testing::small_train_config;
using seje::testing::synthetic_pairs;

fs::path temp_dir() {
  const fs::path d = fs::temp_directory_path() / "seje_test_trainer";
  fs::create_directories(d);
  return d;
}

std::vector<double> trace_of(const Trainer& t) {
  std::vector<double> out;
  for (const auto& b : t.losses())
    for (double v : {b.tri, b.ca_r, b.ca_v, b.da, b.d, b.total}) out.push_back(v);
  return out;
}

std::vector<const PreparedPair*> pointers(const std::vector<PreparedPair>& pairs, std::size_t n) {
  std::vector<const PreparedPair*> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(&pairs[i]);
  return out;
}

TEST(Config, ValidationAndTextRoundTrip) {
  TrainConfig c = small_train_config();
  EXPECT_NO_THROW(c.validate());
  c.batch_size = 1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_train_config();
  c.learning_rate = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);

  c = small_train_config();
  c.seed = 99;
  c.loss.lambda_d = 3.25;
  c.use_da = false;
  c.learning_rate = 1.0 / 3.0;
  TrainConfig back;
  back.apply(KeyValueConfig::parse(c.to_text()));
  EXPECT_EQ(back.to_text(), c.to_text());
  EXPECT_EQ(back.learning_rate, c.learning_rate);
  EXPECT_EQ(back.joint.image_channels, c.joint.image_channels);
  EXPECT_EQ(back.joint.seed, 99u);
}

TEST(Trainer, TwoEpochsEmitOneRecordPerBatch) {
  const TrainConfig cfg = small_train_config();
  const auto train = synthetic_pairs(350, 4, cfg.joint, 1);
  const auto val = synthetic_pairs(50, 4, cfg.joint, 2);
  Trainer t(cfg, 4);
  t.run(train, val);
  EXPECT_EQ(t.losses().size(), 2u * 22u);
  ASSERT_EQ(t.history().size(), 2u);
  for (const auto& b : t.losses()) {
    EXPECT_GE(b.tri, 0.0);
    EXPECT_GE(b.ca, 0.0);
    EXPECT_NEAR(b.total, b.tri + cfg.loss.lambda1 * b.ca + cfg.loss.lambda2 * b.da, 1e-9);
  }
  const fs::path log = temp_dir() / "losses.jsonl";
  t.write_loss_log(log);
  std::ifstream is(log);
  std::size_t lines = 0;
  for (std::string l; std::getline(is, l); ++lines) EXPECT_TRUE(nlohmann::json::parse(l).contains("L_total"));
  EXPECT_EQ(lines, 44u);
}

TEST(Trainer, SameSeedSameTrace) {
  const TrainConfig cfg = small_train_config();
  const auto train = synthetic_pairs(80, 4, cfg.joint, 3);
  const auto val = synthetic_pairs(20, 4, cfg.joint, 4);
  Trainer a(cfg, 4), b(cfg, 4);
  a.run(train, val);
  b.run(train, val);
  EXPECT_EQ(trace_of(a), trace_of(b));
  TrainConfig other = cfg;
  other.seed = 2;
  Trainer c(other, 4);
  c.run(train, val);
  EXPECT_NE(trace_of(a), trace_of(c));
}

TEST(Trainer, StepsOnlyTouchTheirOwnParameters) {
  const TrainConfig cfg = small_train_config();
  const auto pairs = synthetic_pairs(16, 4, cfg.joint, 5);
  Trainer t(cfg, 4);
  const auto fwd = t.forward_batch(pointers(pairs, 16));
  const auto enc0 = nn::snapshot(t.model().encoder_params());
  const auto disc0 = nn::snapshot(t.model().disc_params());
  Rng noise(1);
  const double l_d = t.discriminator_step(fwd, noise);
  EXPECT_EQ(nn::snapshot(t.model().encoder_params()), enc0);
  const auto disc1 = nn::snapshot(t.model().disc_params());
  EXPECT_NE(disc1, disc0);
  t.encoder_step(fwd, l_d);
  EXPECT_EQ(nn::snapshot(t.model().disc_params()), disc1);
  EXPECT_NE(nn::snapshot(t.model().encoder_params()), enc0);
}

TEST(Trainer, ResumeIsBitExact) {
  TrainConfig cfg = small_train_config();
  cfg.epochs = 3;
  const auto train = synthetic_pairs(60, 4, cfg.joint, 6);
  const auto val = synthetic_pairs(20, 4, cfg.joint, 7);
  Trainer full(cfg, 4);
  full.run(train, val);

  Trainer first(cfg, 4);
  first.run_epoch(train, val);
  first.run_epoch(train, val);
  const fs::path state = temp_dir() / "state.ckpt";
  first.save_state(state);
  Trainer resumed = Trainer::load_state(state);
  EXPECT_EQ(resumed.epoch(), 2);
  resumed.run(train, val);
  EXPECT_EQ(trace_of(resumed), trace_of(full));
  EXPECT_EQ(nn::snapshot(resumed.model().all_params()), nn::snapshot(full.model().all_params()));
  EXPECT_EQ(resumed.best_epoch(), full.best_epoch());
  EXPECT_EQ(resumed.best_val_medr(), full.best_val_medr());
  ASSERT_EQ(resumed.history().size(), full.history().size());
  for (std::size_t e = 0; e < full.history().size(); ++e)
    EXPECT_EQ(resumed.history()[e].val_medr, full.history()[e].val_medr);
}

TEST(Trainer, CopiesTrainTheirOwnModel) {
  TrainConfig cfg = small_train_config();
  cfg.epochs = 1;
  const auto train = synthetic_pairs(40, 4, cfg.joint, 19);
  const auto val = synthetic_pairs(12, 4, cfg.joint, 20);
  Trainer original(cfg, 4);
  original.run(train, val);
  Trainer copy = original;
  Trainer moved = std::move(Trainer(original));
  const auto before = nn::snapshot(original.model().all_params());
  for (Trainer* t : {&copy, &moved}) {
    t->set_epochs(2);
    t->run(train, val);
  }
  EXPECT_EQ(nn::snapshot(original.model().all_params()), before);
  EXPECT_EQ(trace_of(copy), trace_of(moved));
  EXPECT_NE(nn::snapshot(copy.model().all_params()), before);
}

TEST(Trainer, TrainingImprovesValidationMedianRank) {
  int improved = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TrainConfig cfg = small_train_config();
    cfg.epochs = 5;
    cfg.seed = seed;
    const auto train = synthetic_pairs(200, 5, cfg.joint, 10 + seed);
    const auto val = synthetic_pairs(50, 5, cfg.joint, 10 + seed);
    Trainer t(cfg, 5);
    t.run(train, val);
    if (t.history().back().val_medr < *t.initial_val_medr()) ++improved;
  }
  EXPECT_GE(improved, 4);
}

TEST(Trainer, NonFiniteInputDiverges) {
  const TrainConfig cfg = small_train_config();
  auto train = synthetic_pairs(32, 4, cfg.joint, 8);
  train[3].key_term_feature[0] = std::numeric_limits<double>::quiet_NaN();
  Trainer t(cfg, 4);
  EXPECT_THROW(t.run_epoch(train, synthetic_pairs(10, 4, cfg.joint, 9)), DivergenceError);
}

TEST(Trainer, BestModelAndSavedModelRoundTrip) {
  TrainConfig cfg = small_train_config();
  cfg.epochs = 3;
  const auto train = synthetic_pairs(60, 4, cfg.joint, 12);
  const auto val = synthetic_pairs(20, 4, cfg.joint, 13);
  Trainer t(cfg, 4);
  t.run(train, val);
  const JointModel best = t.best_model();
  EXPECT_EQ(validation_medr(best, val), t.best_val_medr());
  const fs::path path = temp_dir() / "model.ckpt";
  save_model(path, best, cfg, 4);
  const SavedModel back = load_model(path);
  EXPECT_EQ(back.num_categories, 4);
  EXPECT_EQ(back.config.to_text(), cfg.to_text());
  const Embeddings a = embed_all(best, val), b = embed_all(back.model, val);
  EXPECT_EQ(a.recipes, b.recipes);
  EXPECT_EQ(a.images, b.images);
}

TEST(Switches, CalibrationSwitchesZeroTheirInputs) {
  TrainConfig cfg = small_train_config();
  const auto pairs = synthetic_pairs(2, 2, cfg.joint, 14);
  cfg.use_cal_r = false;
  cfg.use_cal_v = false;
  const JointModel m(cfg, 2);
  PreparedPair changed = pairs[0];
  changed.key_term_feature.setRandom();
  changed.category_vector.setRandom();
  EXPECT_EQ(m.embed_recipe(pairs[0]), m.embed_recipe(changed));
  EXPECT_EQ(m.embed_image(pairs[0]), m.embed_image(changed));
}

TEST(Switches, CoarseLabelsUseABackgroundClass) {
  TrainConfig cfg = small_train_config();
  cfg.use_ca_original_labels = true;
  const auto pairs = synthetic_pairs(40, 4, cfg.joint, 15);
  Trainer t(cfg, 4);
  int background = 0;
  for (const auto& p : pairs) {
    const int label = t.head_label(p);
    if (label == 4) ++background;
    else EXPECT_EQ(label, p.category);
  }
  EXPECT_GT(background, 0);
  EXPECT_LT(background, 40);
  EXPECT_EQ(t.model().num_classes(), 5);
}

TEST(Ablation, RowParsing) {
  const TrainConfig base = small_train_config();
  const AblationRow b = ablation_row("SEJE-b", base);
  EXPECT_TRUE(b.config.use_batch_all);
  EXPECT_FALSE(b.config.use_ca || b.config.use_da || b.config.use_cal_v || b.config.use_cal_r);
  const AblationRow tri = ablation_row("SEJE-b+TRI", base);
  EXPECT_FALSE(tri.config.use_batch_all);
  EXPECT_FALSE(tri.config.use_hard_negatives_single_constraint);
  const AblationRow full = ablation_row("SEJE-b+P I+P II", base);
  EXPECT_TRUE(full.config.use_ca && full.config.use_da && full.config.use_cal_v && full.config.use_cal_r);
  EXPECT_FALSE(full.config.use_batch_all);
  EXPECT_TRUE(ablation_row("SEJE-b+TRI(-)", base).config.use_hard_negatives_single_constraint);
  EXPECT_TRUE(ablation_row("SEJE-b+CA(-)", base).config.use_ca_original_labels);
  EXPECT_THROW(ablation_row("SEJE-b+XYZ", base), ConfigError);
  EXPECT_THROW(ablation_row("TRI", base), ConfigError);
  const auto rows = standard_ablation_rows();
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows.front(), "SEJE-b");
  for (const auto& r : rows) EXPECT_NO_THROW(ablation_row(r, base));
}

TEST(Ablation, TwoRowTableIsCompleteAndDeterministic) {
  const TrainConfig cfg = small_train_config();
  const auto train = synthetic_pairs(48, 4, cfg.joint, 16);
  const auto val = synthetic_pairs(12, 4, cfg.joint, 17);
  const auto test = synthetic_pairs(30, 4, cfg.joint, 18);
  const std::vector<std::string> rows{"SEJE-b", "SEJE-b+TRI"};
  const AblationTable a = run_ablation(rows, cfg, train, val, test, 4, 20, 3);
  const AblationTable b = run_ablation(rows, cfg, train, val, test, 4, 20, 3);
  ASSERT_EQ(a.rows.size(), 2u);
  EXPECT_EQ(a.to_json(), b.to_json());
  const auto j = nlohmann::json::parse(a.to_json());
  ASSERT_EQ(j.size(), 2u);
  for (const auto& row : j) {
    EXPECT_TRUE(row["report"].contains("image_to_recipe"));
    EXPECT_TRUE(row["report"].contains("recipe_to_image"));
  }
  const std::string md = a.to_markdown();
  EXPECT_NE(md.find("| SEJE-b |"), std::string::npos);
  EXPECT_NE(md.find("| SEJE-b+TRI |"), std::string::npos);
}

}  // namespace
}  // namespace seje::trainer
