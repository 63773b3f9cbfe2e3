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

#include "seje/trainer.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <numeric>
#include <sstream>

#include "seje/checkpoint.hpp"

namespace seje::trainer {

namespace {

constexpr std::uint64_t kShuffleStream = 0x7000;
constexpr std::uint64_t kNoiseStream = 0x8000;

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<int> parse_channels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("image_channels: cannot parse '" + text + "'");
    }
  }
  return out;
}

bool finite(const losses::LossBundle& b) {
  return std::isfinite(b.total) && std::isfinite(b.d) && std::isfinite(b.tri) && std::isfinite(b.ca) &&
         std::isfinite(b.da);
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 0) throw ConfigError("epochs must be non-negative");
  if (batch_size < 2) throw ConfigError("batch_size must be at least 2");
  if (!(learning_rate > 0)) throw ConfigError("learning_rate must be positive");
  if (disc_steps < 0) throw ConfigError("disc_steps must be non-negative");
  if (use_batch_all && use_hard_negatives_single_constraint)
    throw ConfigError("use_batch_all and use_hard_negatives_single_constraint are exclusive");
  loss.validate();
  joint.validate();
}

void TrainConfig::apply(const KeyValueConfig& kv) {
  kv.read("epochs", epochs);
  kv.read("batch_size", batch_size);
  kv.read("learning_rate", learning_rate);
  kv.read("adam_beta1", adam_beta1);
  kv.read("adam_beta2", adam_beta2);
  kv.read("adam_eps", adam_eps);
  kv.read("seed", seed);
  kv.read("disc_steps", disc_steps);
  kv.read("use_batch_all", use_batch_all);
  kv.read("use_hard_negatives_single_constraint", use_hard_negatives_single_constraint);
  kv.read("use_ca", use_ca);
  kv.read("use_ca_original_labels", use_ca_original_labels);
  kv.read("use_da", use_da);
  kv.read("use_cal_v", use_cal_v);
  kv.read("use_cal_r", use_cal_r);
  kv.read("lambda1", loss.lambda1);
  kv.read("lambda2", loss.lambda2);
  kv.read("gamma", loss.gamma);
  kv.read("margin", loss.margin);
  kv.read("lambda_d", loss.lambda_d);
  kv.read("batch_all_margin", loss.batch_all_margin);
  kv.read("eq4_as_printed", loss.eq4_as_printed);
  kv.read("d", joint.d);
  kv.read("lstm_hidden", joint.lstm_hidden);
  kv.read("d_w", joint.d_w);
  kv.read("d_s", joint.d_s);
  kv.read("disc_hidden", joint.disc_hidden);
  kv.read("image_height", joint.image_height);
  kv.read("image_width", joint.image_width);
  std::string channels;
  kv.read("image_channels", channels);
  if (!channels.empty()) joint.image_channels = parse_channels(channels);
  joint.seed = seed;
}

std::string TrainConfig::to_text() const {
  std::ostringstream o;
  auto b = [](bool v) { return v ? "true" : "false"; };
  o << "epochs=" << epochs << "\nbatch_size=" << batch_size << "\nlearning_rate=" << exact(learning_rate)
    << "\nadam_beta1=" << exact(adam_beta1) << "\nadam_beta2=" << exact(adam_beta2)
    << "\nadam_eps=" << exact(adam_eps) << "\nseed=" << seed << "\ndisc_steps=" << disc_steps
    << "\nuse_batch_all=" << b(use_batch_all)
    << "\nuse_hard_negatives_single_constraint=" << b(use_hard_negatives_single_constraint)
    << "\nuse_ca=" << b(use_ca) << "\nuse_ca_original_labels=" << b(use_ca_original_labels)
    << "\nuse_da=" << b(use_da) << "\nuse_cal_v=" << b(use_cal_v) << "\nuse_cal_r=" << b(use_cal_r)
    << "\nlambda1=" << exact(loss.lambda1) << "\nlambda2=" << exact(loss.lambda2) << "\ngamma=" << exact(loss.gamma)
    << "\nmargin=" << exact(loss.margin) << "\nlambda_d=" << exact(loss.lambda_d)
    << "\nbatch_all_margin=" << exact(loss.batch_all_margin) << "\neq4_as_printed=" << b(loss.eq4_as_printed)
    << "\nd=" << joint.d << "\nlstm_hidden=" << joint.lstm_hidden << "\nd_w=" << joint.d_w << "\nd_s=" << joint.d_s
    << "\ndisc_hidden=" << joint.disc_hidden << "\nimage_height=" << joint.image_height
    << "\nimage_width=" << joint.image_width << "\nimage_channels=";
  for (std::size_t i = 0; i < joint.image_channels.size(); ++i) o << (i ? "," : "") << joint.image_channels[i];
  o << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------

JointModel::JointModel(const TrainConfig& config, int num_classes)
    : use_cal_v(config.use_cal_v), use_cal_r(config.use_cal_r) {
  Rng rng(config.seed, 0x101);
  recipe = encoders::RecipeEncoder(config.joint, rng);
  image = encoders::ImageEncoder(config.joint, rng);
  disc = encoders::Discriminator(config.joint, rng);
  recipe_head = nn::Linear("head.recipe", config.joint.d, num_classes, rng);
  image_head = nn::Linear("head.image", config.joint.d, num_classes, rng);
}

Vector JointModel::embed_recipe(const PreparedPair& p, encoders::RecipeTrace* trace) const {
  if (use_cal_r) return recipe.forward(p.sentences, p.key_term_feature, trace);
  return recipe.forward(p.sentences, Vector::Zero(p.key_term_feature.size()), trace);
}

Vector JointModel::embed_image(const PreparedPair& p, encoders::ImageTrace* trace) const {
  if (use_cal_v) return image.forward(p.pixels, p.category_vector, trace);
  return image.forward(p.pixels, Vector::Zero(p.category_vector.size()), trace);
}

nn::ParamRefs JointModel::encoder_params() {
  nn::ParamRefs out = recipe.params();
  for (auto* p : image.params()) out.push_back(p);
  for (auto* p : recipe_head.params()) out.push_back(p);
  for (auto* p : image_head.params()) out.push_back(p);
  return out;
}

nn::ParamRefs JointModel::all_params() {
  nn::ParamRefs out = encoder_params();
  for (auto* p : disc.params()) out.push_back(p);
  return out;
}

Embeddings embed_all(const JointModel& model, const std::vector<PreparedPair>& pairs) {
  const Index n = static_cast<Index>(pairs.size());
  Embeddings e;
  if (n == 0) return e;
  for (Index i = 0; i < n; ++i) {
    const Vector r = model.embed_recipe(pairs[static_cast<std::size_t>(i)]);
    const Vector v = model.embed_image(pairs[static_cast<std::size_t>(i)]);
    if (i == 0) {
      e.recipes.resize(n, r.size());
      e.images.resize(n, v.size());
    }
    e.recipes.row(i) = r.transpose();
    e.images.row(i) = v.transpose();
  }
  return e;
}

double validation_medr(const JointModel& model, const std::vector<PreparedPair>& pairs) {
  if (pairs.empty()) return 0.0;
  const Embeddings e = embed_all(model, pairs);
  return eval::evaluate_subset(e.recipes, e.images, {1}).image_to_recipe.medr;
}

// ---------------------------------------------------------------------------

Trainer::Trainer(const TrainConfig& config, int num_categories) : config_(config), num_categories_(num_categories) {
  config_.joint.seed = config_.seed;
  config_.validate();
  if (num_categories < 1) throw ConfigError("at least one category is required");
  model_ = JointModel(config_, num_categories + (config_.use_ca_original_labels ? 1 : 0));
  const AdamConfig adam{config_.learning_rate, config_.adam_beta1, config_.adam_beta2, config_.adam_eps};
  enc_adam_ = Adam(model_.encoder_params(), adam);
  disc_adam_ = Adam(model_.disc_params(), adam);
}

Trainer::Trainer(const Trainer& o)
    : config_(o.config_), num_categories_(o.num_categories_), model_(o.model_), enc_adam_(o.enc_adam_),
      disc_adam_(o.disc_adam_), epoch_(o.epoch_), losses_(o.losses_), history_(o.history_),
      best_params_(o.best_params_), best_medr_(o.best_medr_), best_epoch_(o.best_epoch_),
      initial_medr_(o.initial_medr_) {
  rebind_optimisers();
}

Trainer::Trainer(Trainer&& o) noexcept
    : config_(std::move(o.config_)), num_categories_(o.num_categories_), model_(std::move(o.model_)),
      enc_adam_(std::move(o.enc_adam_)), disc_adam_(std::move(o.disc_adam_)), epoch_(o.epoch_),
      losses_(std::move(o.losses_)), history_(std::move(o.history_)), best_params_(std::move(o.best_params_)),
      best_medr_(o.best_medr_), best_epoch_(o.best_epoch_), initial_medr_(o.initial_medr_) {
  rebind_optimisers();
}

Trainer& Trainer::operator=(const Trainer& o) {
  if (this != &o) *this = Trainer(o);
  return *this;
}

Trainer& Trainer::operator=(Trainer&& o) noexcept {
  config_ = std::move(o.config_);
  num_categories_ = o.num_categories_;
  model_ = std::move(o.model_);
  enc_adam_ = std::move(o.enc_adam_);
  disc_adam_ = std::move(o.disc_adam_);
  epoch_ = o.epoch_;
  losses_ = std::move(o.losses_);
  history_ = std::move(o.history_);
  best_params_ = std::move(o.best_params_);
  best_medr_ = o.best_medr_;
  best_epoch_ = o.best_epoch_;
  initial_medr_ = o.initial_medr_;
  rebind_optimisers();
  return *this;
}

void Trainer::rebind_optimisers() {
  enc_adam_.rebind(model_.encoder_params());
  disc_adam_.rebind(model_.disc_params());
}

int Trainer::head_label(const PreparedPair& p) const {
  // Coarse stand-in labels: half the pairs, chosen by id, fall into one
  // background class.
  if (config_.use_ca_original_labels && hash_string(p.id) % 2 == 0) return num_categories_;
  return p.category;
}

Trainer::BatchForward Trainer::forward_batch(const std::vector<const PreparedPair*>& batch) const {
  const Index n = static_cast<Index>(batch.size());
  const Index d = config_.joint.d;
  BatchForward f;
  f.pairs = batch;
  f.recipe_traces.resize(batch.size());
  f.image_traces.resize(batch.size());
  f.embeddings = losses::EmbeddingBatch{Matrix(n, d), Matrix(n, d), std::vector<int>(batch.size())};
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& p = *batch[i];
    const Index r = static_cast<Index>(i);
    f.embeddings.recipes.row(r) = model_.embed_recipe(p, &f.recipe_traces[i]).transpose();
    f.embeddings.images.row(r) = model_.embed_image(p, &f.image_traces[i]).transpose();
    f.embeddings.categories[i] = p.category;
  }
  return f;
}

double Trainer::discriminator_step(const BatchForward& fwd, Rng& noise) {
  double l_d = 0.0;
  if (!config_.use_da) return l_d;
  for (int k = 0; k < config_.disc_steps; ++k) {
    disc_adam_.zero_grad();
    l_d = losses::discriminator_loss(model_.disc, fwd.embeddings.recipes, fwd.embeddings.images, config_.loss, noise,
                                     true)
              .value;
    if (!std::isfinite(l_d))
      throw DivergenceError("non-finite discriminator loss at step " + std::to_string(losses_.size()));
    disc_adam_.step();
  }
  return l_d;
}

losses::LossBundle Trainer::encoder_step(const BatchForward& fwd, double l_d) {
  const losses::EmbeddingBatch& eb = fwd.embeddings;
  const Index n = eb.size();
  enc_adam_.zero_grad();
  const losses::TripletMode mode = config_.use_batch_all ? losses::TripletMode::kBatchAll
                                   : config_.use_hard_negatives_single_constraint
                                       ? losses::TripletMode::kBatchHardNearestOnly
                                       : losses::TripletMode::kBatchHard;
  const losses::BatchLoss tri = losses::triplet_loss(eb, config_.loss, mode);
  Matrix d_r = tri.grad_recipes;
  Matrix d_v = tri.grad_images;

  double ca_r = 0.0, ca_v = 0.0;
  if (config_.use_ca) {
    const Index c = model_.recipe_head.out();
    Matrix lr(n, c), lv(n, c);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      lr.row(i) = model_.recipe_head.forward(eb.recipes.row(i).transpose()).transpose();
      lv.row(i) = model_.image_head.forward(eb.images.row(i).transpose()).transpose();
      labels[static_cast<std::size_t>(i)] = head_label(*fwd.pairs[static_cast<std::size_t>(i)]);
    }
    const losses::CategoryLoss ca = losses::category_alignment_loss(lr, lv, labels);
    ca_r = ca.ca_r;
    ca_v = ca.ca_v;
    const double l1 = config_.loss.lambda1;
    for (Index i = 0; i < n; ++i) {
      d_r.row(i) += model_.recipe_head
                        .backward(eb.recipes.row(i).transpose(), l1 * ca.grad_recipe_logits.row(i).transpose())
                        .transpose();
      d_v.row(i) += model_.image_head
                        .backward(eb.images.row(i).transpose(), l1 * ca.grad_image_logits.row(i).transpose())
                        .transpose();
    }
  }

  double da = 0.0;
  if (config_.use_da) {
    const losses::BatchLoss l = losses::discriminator_alignment_loss(model_.disc, eb.recipes);
    da = l.value;
    d_r += config_.loss.lambda2 * l.grad_recipes;
  }

  const losses::LossBundle bundle = losses::total_loss(tri.value, ca_r, ca_v, da, l_d, config_.loss);
  if (!finite(bundle)) throw DivergenceError("non-finite loss at step " + std::to_string(losses_.size()));

  for (Index i = 0; i < n; ++i) {
    model_.recipe.backward(fwd.recipe_traces[static_cast<std::size_t>(i)], d_r.row(i).transpose());
    model_.image.backward(fwd.image_traces[static_cast<std::size_t>(i)], d_v.row(i).transpose());
  }
  // Only encoder and head parameters are registered with this optimiser.
  enc_adam_.step();
  return bundle;
}

losses::LossBundle Trainer::train_batch(const std::vector<const PreparedPair*>& batch, Rng& noise) {
  const BatchForward fwd = forward_batch(batch);
  const double l_d = discriminator_step(fwd, noise);
  return encoder_step(fwd, l_d);
}

void Trainer::run_epoch(const std::vector<PreparedPair>& train, const std::vector<PreparedPair>& val) {
  if (train.size() < 2) throw ConfigError("training needs at least 2 pairs");
  if (!initial_medr_) initial_medr_ = validation_medr(model_, val);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle(config_.seed, kShuffleStream + static_cast<std::uint64_t>(epoch_));
  shuffle.shuffle(order);
  Rng noise(config_.seed, kNoiseStream + static_cast<std::uint64_t>(epoch_));

  const std::size_t bs = static_cast<std::size_t>(config_.batch_size);
  double total = 0.0;
  std::size_t steps = 0;
  for (std::size_t start = 0; start < order.size(); start += bs) {
    std::vector<const PreparedPair*> batch;
    for (std::size_t k = start; k < std::min(order.size(), start + bs); ++k) batch.push_back(&train[order[k]]);
    // A trailing singleton cannot form a triplet.
    if (batch.size() < 2) continue;
    const losses::LossBundle b = train_batch(batch, noise);
    losses_.push_back(b);
    total += b.total;
    ++steps;
  }

  const double medr = validation_medr(model_, val);
  history_.push_back({epoch_, steps ? total / static_cast<double>(steps) : 0.0, medr});
  if (best_epoch_ < 0 || medr < best_medr_) {
    best_medr_ = medr;
    best_epoch_ = epoch_;
    best_params_ = nn::snapshot(model_.all_params());
  }
  spdlog::info("epoch {}: mean loss {:.4f}, validation MedR {}", epoch_ + 1, history_.back().mean_total, medr);
  ++epoch_;
}

void Trainer::run(const std::vector<PreparedPair>& train, const std::vector<PreparedPair>& val) {
  while (epoch_ < config_.epochs) run_epoch(train, val);
}

JointModel Trainer::best_model() const {
  JointModel m = model_;
  if (best_params_.empty()) return m;
  const nn::ParamRefs params = m.all_params();
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best_params_[i];
  return m;
}

void Trainer::save_state(const std::filesystem::path& path) const {
  Checkpoint ckpt;
  ckpt.set_meta("kind", "trainer_state");
  ckpt.set_meta("config", config_.to_text());
  ckpt.set_meta("num_categories", std::to_string(num_categories_));
  ckpt.set_meta("epoch", std::to_string(epoch_));
  ckpt.set_meta("best_epoch", std::to_string(best_epoch_));
  ckpt.set_meta("best_medr", exact(best_medr_));
  if (initial_medr_) ckpt.set_meta("initial_medr", exact(*initial_medr_));
  auto& self = const_cast<Trainer&>(*this);
  ckpt.put_params(self.model_.all_params(), "model/");
  enc_adam_.save_state(ckpt, "enc.");
  disc_adam_.save_state(ckpt, "disc.");
  const nn::ParamRefs params = self.model_.all_params();
  for (std::size_t i = 0; i < best_params_.size(); ++i) ckpt.put("best/" + params[i]->name, best_params_[i]);
  Matrix trace(static_cast<Index>(losses_.size()), 7);
  for (std::size_t i = 0; i < losses_.size(); ++i) {
    const auto& b = losses_[i];
    trace.row(static_cast<Index>(i)) << b.tri, b.ca, b.ca_r, b.ca_v, b.da, b.d, b.total;
  }
  ckpt.put("trace/losses", trace);
  Matrix hist(static_cast<Index>(history_.size()), 3);
  for (std::size_t i = 0; i < history_.size(); ++i)
    hist.row(static_cast<Index>(i)) << history_[i].epoch, history_[i].mean_total, history_[i].val_medr;
  ckpt.put("trace/history", hist);
  ckpt.save(path);
}

Trainer Trainer::load_state(const std::filesystem::path& path) {
  const Checkpoint ckpt = Checkpoint::load(path);
  if (!ckpt.has_meta("kind") || ckpt.meta("kind") != "trainer_state")
    throw SchemaError(path.string() + " is not a trainer state checkpoint");
  TrainConfig cfg;
  cfg.apply(KeyValueConfig::parse(ckpt.meta("config")));
  Trainer t(cfg, std::stoi(ckpt.meta("num_categories")));
  ckpt.get_params(t.model_.all_params(), "model/");
  t.enc_adam_.load_state(ckpt, "enc.");
  t.disc_adam_.load_state(ckpt, "disc.");
  t.epoch_ = std::stoi(ckpt.meta("epoch"));
  t.best_epoch_ = std::stoi(ckpt.meta("best_epoch"));
  t.best_medr_ = std::stod(ckpt.meta("best_medr"));
  if (ckpt.has_meta("initial_medr")) t.initial_medr_ = std::stod(ckpt.meta("initial_medr"));
  if (t.best_epoch_ >= 0)
    for (auto* p : t.model_.all_params()) t.best_params_.push_back(ckpt.get("best/" + p->name));
  const Matrix& trace = ckpt.get("trace/losses");
  for (Index i = 0; i < trace.rows(); ++i) {
    losses::LossBundle b;
    b.tri = trace(i, 0);
    b.ca = trace(i, 1);
    b.ca_r = trace(i, 2);
    b.ca_v = trace(i, 3);
    b.da = trace(i, 4);
    b.d = trace(i, 5);
    b.total = trace(i, 6);
    t.losses_.push_back(b);
  }
  const Matrix& hist = ckpt.get("trace/history");
  for (Index i = 0; i < hist.rows(); ++i)
    t.history_.push_back({static_cast<int>(hist(i, 0)), hist(i, 1), hist(i, 2)});
  return t;
}

void Trainer::write_loss_log(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (std::size_t i = 0; i < losses_.size(); ++i) out << losses::loss_record(static_cast<std::int64_t>(i), losses_[i]) << "\n";
}

void save_model(const std::filesystem::path& path, const JointModel& model, const TrainConfig& config,
                int num_categories) {
  Checkpoint ckpt;
  ckpt.set_meta("kind", "joint_model");
  ckpt.set_meta("config", config.to_text());
  ckpt.set_meta("num_categories", std::to_string(num_categories));
  ckpt.put_params(const_cast<JointModel&>(model).all_params());
  ckpt.save(path);
}

SavedModel load_model(const std::filesystem::path& path) {
  const Checkpoint ckpt = Checkpoint::load(path);
  if (!ckpt.has_meta("kind") || ckpt.meta("kind") != "joint_model")
    throw SchemaError(path.string() + " is not a joint model checkpoint");
  SavedModel out;
  out.config.apply(KeyValueConfig::parse(ckpt.meta("config")));
  out.num_categories = std::stoi(ckpt.meta("num_categories"));
  out.model = JointModel(out.config, out.num_categories + (out.config.use_ca_original_labels ? 1 : 0));
  ckpt.get_params(out.model.all_params());
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::string> standard_ablation_rows() {
  return {"SEJE-b",         "SEJE-b+Cal_V",   "SEJE-b+Cal_R",      "SEJE-b+P I",     "SEJE-b+P I+CA(-)",
          "SEJE-b+P I+CA",  "SEJE-b+P I+DA",  "SEJE-b+P I+TRI(-)", "SEJE-b+P I+TRI", "SEJE-b+P I+P II"};
}

AblationRow ablation_row(const std::string& name, const TrainConfig& base) {
  TrainConfig c = base;
  c.use_batch_all = true;
  c.use_hard_negatives_single_constraint = false;
  c.use_ca = false;
  c.use_ca_original_labels = false;
  c.use_da = false;
  c.use_cal_v = false;
  c.use_cal_r = false;
  std::vector<std::string> parts;
  std::stringstream ss(name);
  for (std::string part; std::getline(ss, part, '+');) parts.push_back(part);
  if (parts.empty() || parts.front() != "SEJE-b") throw ConfigError("ablation row '" + name + "' must start with SEJE-b");
  auto triplet = [&](bool single) {
    c.use_batch_all = false;
    c.use_hard_negatives_single_constraint = single;
  };
  for (std::size_t i = 1; i < parts.size(); ++i) {
    std::string p = parts[i];
    while (!p.empty() && p.front() == ' ') p.erase(p.begin());
    while (!p.empty() && p.back() == ' ') p.pop_back();
    if (p == "Cal_V") {
      c.use_cal_v = true;
    } else if (p == "Cal_R") {
      c.use_cal_r = true;
    } else if (p == "P I" || p == "PI") {
      c.use_cal_v = c.use_cal_r = true;
    } else if (p == "CA(-)") {
      c.use_ca = c.use_ca_original_labels = true;
    } else if (p == "CA") {
      c.use_ca = true;
      c.use_ca_original_labels = false;
    } else if (p == "DA") {
      c.use_da = true;
    } else if (p == "TRI(-)") {
      triplet(true);
    } else if (p == "TRI") {
      triplet(false);
    } else if (p == "P II" || p == "PII") {
      c.use_ca = c.use_da = true;
      c.use_ca_original_labels = false;
      triplet(false);
    } else {
      throw ConfigError("unknown ablation component '" + p + "' in '" + name + "'");
    }
  }
  return {name, c};
}

AblationTable run_ablation(const std::vector<std::string>& rows, const TrainConfig& base,
                           const std::vector<PreparedPair>& train, const std::vector<PreparedPair>& val,
                           const std::vector<PreparedPair>& test, int num_categories, int subset_size, int trials) {
  std::vector<AblationRow> grid;
  for (const auto& r : rows) grid.push_back(ablation_row(r, base));
  AblationTable table;
  for (const auto& row : grid) {
    spdlog::info("ablation row {}", row.name);
    Trainer t(row.config, num_categories);
    t.run(train, val);
    const Embeddings e = embed_all(t.best_model(), test);
    std::vector<int> ks;
    for (int k : {1, 5, 10})
      if (k <= subset_size) ks.push_back(k);
    table.rows.push_back({row.name, eval::evaluate_protocol(e.recipes, e.images, subset_size, trials, base.seed, ks),
                          t.best_val_medr()});
  }
  return table;
}

std::string AblationTable::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["name"] = r.name;
    row["best_val_medr"] = r.best_val_medr;
    row["report"] = nlohmann::ordered_json::parse(r.report.to_json());
    j.push_back(row);
  }
  return j.dump(2);
}

std::string AblationTable::to_markdown() const {
  std::ostringstream o;
  o << "| row | MedR | R@1 | R@5 | R@10 |\n|---|---|---|---|---|\n";
  char buf[160];
  for (const auto& r : rows) {
    const auto& i2r = r.report.image_to_recipe;
    auto recall = [&](int k) { return i2r.mean_recall.count(k) ? i2r.mean_recall.at(k) : 0.0; };
    std::snprintf(buf, sizeof buf, "| %s | %.1f | %.1f | %.1f | %.1f |\n", r.name.c_str(), i2r.mean_medr, recall(1),
                  recall(5), recall(10));
    o << buf;
  }
  return o.str();
}

}  // namespace seje::trainer
