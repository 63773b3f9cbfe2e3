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

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <algorithm>

#include "manifest.hpp"
#include "seje/evalkit.hpp"
#include "seje/pipeline.hpp"
#include "seje/trainer.hpp"

namespace fs = std::filesystem;
using namespace seje;

namespace {

const std::vector<std::string> kGenKeys = {"categories", "per_category", "vocab_size", "image_size", "seed",
                                           "ingredient_pool", "utensil_pool", "action_pool", "signature_rate",
                                           "pixel_noise"};
const std::vector<std::string> kEvalKeys = {"subset_size", "trials", "split", "k"};

std::vector<std::string> train_keys() {
  std::vector<std::string> keys;
  const KeyValueConfig defaults = KeyValueConfig::parse(trainer::TrainConfig{}.to_text());
  for (const auto& [k, v] : defaults.values()) keys.push_back(k);
  return keys;
}

std::set<std::string> all_keys() {
  std::set<std::string> out(kGenKeys.begin(), kGenKeys.end());
  out.insert(kEvalKeys.begin(), kEvalKeys.end());
  for (const auto& k : pipeline::PreprocessConfig::keys()) out.insert(k);
  for (const auto& k : train_keys()) out.insert(k);
  return out;
}

/// Shared plumbing of one subcommand: --config, --out and one flag per key.
struct Command {
  CLI::App* app = nullptr;
  std::string config_path;
  std::string out;
  std::map<std::string, std::string> values;
  std::vector<std::string> keys;

  Command(CLI::App& root, const std::string& name, const std::string& help, std::vector<std::string> config_keys,
          bool out_required = true)
      : app(root.add_subcommand(name, help)), keys(std::move(config_keys)) {
    app->add_option("--config", config_path, "flat key=value config file");
    auto* o = app->add_option("--out", out, "run directory for every output");
    if (out_required) o->required();
    for (const auto& key : keys) {
      std::string names = "--" + key;
      std::string dashed = key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      if (dashed != key) names += ",--" + dashed;
      app->add_option(names, values[key], "config key " + key);
    }
  }

  bool parsed() const { return app->parsed(); }

  /// Config file, then flags; SEJE_SEED when no seed is given at all.
  KeyValueConfig settings() const {
    KeyValueConfig kv = config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(config_path);
    const std::set<std::string> known = all_keys();
    for (const auto& [k, v] : kv.values())
      if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");
    for (const auto& key : keys)
      if (app->get_option("--" + key)->count() > 0) kv.set(key, values.at(key));
    if (!kv.has("seed")) {
      if (const char* env = std::getenv("SEJE_SEED")) kv.set("seed", env);
    }
    return kv;
  }
};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  for (const auto& k : b)
    if (std::find(a.begin(), a.end(), k) == a.end()) a.push_back(k);
  return a;
}

std::uint64_t seed_of(const KeyValueConfig& kv, std::uint64_t fallback) {
  kv.read("seed", fallback);
  return fallback;
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty() || !fs::exists(path)) throw ConfigError(what + " not found: '" + path + "'");
}

// ---------------------------------------------------------------------------

void gen_data(const Command& c, cli::RunManifest& manifest) {
  const KeyValueConfig kv = c.settings();
  corpus::GeneratorSpec spec;
  kv.read("categories", spec.num_categories);
  kv.read("per_category", spec.pairs_per_category);
  kv.read("vocab_size", spec.vocab_size);
  kv.read("image_size", spec.image_size);
  kv.read("seed", spec.seed);
  kv.read("ingredient_pool", spec.ingredient_pool_size);
  kv.read("utensil_pool", spec.utensil_pool_size);
  kv.read("action_pool", spec.action_pool_size);
  kv.read("signature_rate", spec.signature_rate);
  kv.read("pixel_noise", spec.pixel_noise);
  const corpus::Corpus data = corpus::generate_synthetic_corpus(spec);
  fs::create_directories(c.out);
  const fs::path path = fs::path(c.out) / "corpus.jsonl";
  corpus::save_corpus(data, path);
  manifest.set_config(kv.values());
  manifest.add_seed("seed", spec.seed);
  manifest.add_output(path);
  std::cout << "wrote " << data.size() << " pairs to " << path.string() << "\n";
}

void preprocess(const Command& c, const std::string& corpus_path, cli::RunManifest& manifest) {
  require_file(corpus_path, "corpus");
  const KeyValueConfig kv = c.settings();
  pipeline::PreprocessConfig cfg;
  cfg.apply(kv);
  const corpus::Corpus data = corpus::load_corpus(corpus_path);
  const pipeline::PhaseOne p = pipeline::preprocess(data, cfg);
  p.save(c.out);
  manifest.set_config(kv.values());
  manifest.add_seed("seed", cfg.seed);
  manifest.add_input(corpus_path);
  for (const auto& f : pipeline::PhaseOne::artifact_files()) manifest.add_output(fs::path(c.out) / f);
  std::cout << "rater " << rating::to_string(cfg.rater.algorithm) << ", classifier validation accuracy "
            << p.classifier.validation_accuracy() << "\n";
}

struct Loaded {
  corpus::Corpus data;
  pipeline::PhaseOne phase_one;
  pipeline::PreparedSplit prepared;
};

Loaded load_inputs(const std::string& corpus_path, const std::string& artifacts, cli::RunManifest& manifest) {
  require_file(corpus_path, "corpus");
  if (artifacts.empty() || !fs::is_directory(artifacts)) throw ConfigError("artifact directory not found: '" + artifacts + "'");
  Loaded l{corpus::load_corpus(corpus_path), pipeline::PhaseOne::load(artifacts), {}};
  l.prepared = pipeline::prepare_split(l.data, l.phase_one);
  manifest.add_input(corpus_path);
  for (const auto& f : pipeline::PhaseOne::artifact_files()) manifest.add_input(fs::path(artifacts) / f);
  return l;
}

trainer::TrainConfig train_config(const KeyValueConfig& kv, const Loaded& l) {
  trainer::TrainConfig cfg;
  cfg.apply(kv);
  cfg.joint.d_w = l.phase_one.words.dim();
  cfg.joint.d_s = l.phase_one.sentences.dim();
  cfg.joint.image_height = l.data.image_height;
  cfg.joint.image_width = l.data.image_width;
  cfg.validate();
  return cfg;
}

void train(const Command& c, const std::string& corpus_path, const std::string& artifacts, const std::string& resume,
           cli::RunManifest& manifest) {
  const KeyValueConfig kv = c.settings();
  const Loaded l = load_inputs(corpus_path, artifacts, manifest);
  const fs::path out(c.out);
  fs::create_directories(out);
  const int categories = l.data.categories.count();
  trainer::Trainer t = [&] {
    if (resume.empty()) return trainer::Trainer(train_config(kv, l), categories);
    require_file(resume, "resume state");
    manifest.add_input(resume);
    trainer::Trainer r = trainer::Trainer::load_state(resume);
    int epochs = r.config().epochs;
    kv.read("epochs", epochs);
    r.set_epochs(epochs);
    return r;
  }();
  while (t.epoch() < t.config().epochs) {
    t.run_epoch(l.prepared.train, l.prepared.val);
    t.save_state(out / "state.ckpt");
  }
  trainer::save_model(out / "model.ckpt", t.best_model(), t.config(), categories);
  t.write_loss_log(out / "losses.jsonl");
  std::ofstream hist(out / "history.jsonl");
  for (const auto& h : t.history())
    hist << nlohmann::ordered_json{{"epoch", h.epoch}, {"mean_total", h.mean_total}, {"val_medr", h.val_medr}}.dump()
         << "\n";
  hist.close();
  std::ofstream(out / "train_config.txt") << t.config().to_text();
  manifest.set_config(KeyValueConfig::parse(t.config().to_text()).values());
  manifest.add_seed("seed", t.config().seed);
  for (const char* f : {"model.ckpt", "state.ckpt", "losses.jsonl", "history.jsonl", "train_config.txt"})
    manifest.add_output(out / f);
  std::cout << "best validation MedR " << t.best_val_medr() << " at epoch " << t.best_epoch() + 1 << "\n";
}

void print_report(const eval::ProtocolReport& r) {
  for (const auto* d : {&r.image_to_recipe, &r.recipe_to_image}) {
    std::printf("%s: subset %d, %d trials, MedR %.1f (median %.1f), R@1 %.1f, R@5 %.1f, R@10 %.1f\n",
                eval::to_string(d->direction).c_str(), d->subset_size, d->trials, d->mean_medr, d->median_medr,
                d->mean_recall.count(1) ? d->mean_recall.at(1) : 0.0, d->mean_recall.count(5) ? d->mean_recall.at(5) : 0.0,
                d->mean_recall.count(10) ? d->mean_recall.at(10) : 0.0);
  }
}

const std::vector<trainer::PreparedPair>& pick_split(const Loaded& l, const std::string& name) {
  if (name == "test") return l.prepared.test;
  if (name == "val") return l.prepared.val;
  if (name == "train") return l.prepared.train;
  throw ConfigError("split must be train, val or test");
}

std::vector<int> recall_ks(int subset_size) {
  std::vector<int> ks;
  for (int k : {1, 5, 10})
    if (k <= subset_size) ks.push_back(k);
  return ks;
}

// One JSON object per line: {"recipe": [...], "image": [...]}.
trainer::Embeddings read_embeddings(const std::string& path) {
  require_file(path, "embeddings file");
  std::ifstream in(path);
  std::vector<std::vector<double>> rs, vs;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      rs.push_back(j.at("recipe").get<std::vector<double>>());
      vs.push_back(j.at("image").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(path + " line " + std::to_string(line_no) + ": " + e.what());
    }
    if (rs.back().size() != rs.front().size() || vs.back().size() != rs.front().size())
      throw SchemaError(path + " line " + std::to_string(line_no) + ": embedding dimensions differ");
  }
  if (rs.empty()) throw SchemaError(path + " holds no embeddings");
  trainer::Embeddings e{Matrix(static_cast<Index>(rs.size()), static_cast<Index>(rs[0].size())),
                        Matrix(static_cast<Index>(rs.size()), static_cast<Index>(rs[0].size()))};
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t k = 0; k < rs[0].size(); ++k) {
      e.recipes(static_cast<Index>(i), static_cast<Index>(k)) = rs[i][k];
      e.images(static_cast<Index>(i), static_cast<Index>(k)) = vs[i][k];
    }
  return e;
}

void evaluate(const Command& c, const std::string& corpus_path, const std::string& artifacts, const std::string& model,
              const std::string& embeddings, cli::RunManifest& manifest) {
  const KeyValueConfig kv = c.settings();
  int subset = 0, trials = 10;
  std::string split = "test";
  kv.read("subset_size", subset);
  kv.read("trials", trials);
  kv.read("split", split);
  const std::uint64_t seed = seed_of(kv, 1);
  trainer::Embeddings e;
  if (!embeddings.empty()) {
    e = read_embeddings(embeddings);
    manifest.add_input(embeddings);
  } else {
    require_file(model, "model checkpoint");
    const Loaded l = load_inputs(corpus_path, artifacts, manifest);
    manifest.add_input(model);
    e = trainer::embed_all(trainer::load_model(model).model, pick_split(l, split));
  }
  if (subset == 0) subset = static_cast<int>(e.recipes.rows());
  const eval::ProtocolReport r = eval::evaluate_protocol(e.recipes, e.images, subset, trials, seed, recall_ks(subset));
  fs::create_directories(c.out);
  std::ofstream(fs::path(c.out) / "report.json") << r.to_json() << "\n";
  manifest.set_config(kv.values());
  manifest.add_seed("seed", seed);
  manifest.add_output(fs::path(c.out) / "report.json");
  print_report(r);
}

void retrieve(const Command& c, const std::string& corpus_path, const std::string& artifacts, const std::string& model,
              const std::string& image_query, const std::string& recipe_query, cli::RunManifest& manifest) {
  if (image_query.empty() == recipe_query.empty()) throw ConfigError("give exactly one of --query-image, --query-recipe");
  const KeyValueConfig kv = c.settings();
  int k = 5;
  std::string split = "test";
  kv.read("k", k);
  kv.read("split", split);
  require_file(model, "model checkpoint");
  const Loaded l = load_inputs(corpus_path, artifacts, manifest);
  manifest.add_input(model);
  const trainer::SavedModel m = trainer::load_model(model);
  const auto& pairs = pick_split(l, split);
  const trainer::Embeddings e = trainer::embed_all(m.model, pairs);
  const std::string& id = image_query.empty() ? recipe_query : image_query;
  Index q = -1;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (pairs[i].id == id) q = static_cast<Index>(i);
  if (q < 0) throw ConfigError("pair id '" + id + "' is not in the " + split + " split");
  const bool from_image = !image_query.empty();
  const Vector query = from_image ? Vector(e.images.row(q).transpose()) : Vector(e.recipes.row(q).transpose());
  const Matrix& candidates = from_image ? e.recipes : e.images;
  const std::vector<Index> order = eval::rank(query, candidates);
  fs::create_directories(c.out);
  std::ofstream listing(fs::path(c.out) / "retrieval.tsv");
  std::cout << (from_image ? "recipes" : "images") << " nearest to " << (from_image ? "image " : "recipe ") << id << "\n";
  for (int r = 0; r < std::min<int>(k, static_cast<int>(order.size())); ++r) {
    const Index j = order[static_cast<std::size_t>(r)];
    const double dist = (candidates.row(j).transpose() - query).norm();
    const std::string mark = j == q ? "  (match)" : "";
    std::printf("%2d  %s  %.6f%s\n", r + 1, pairs[static_cast<std::size_t>(j)].id.c_str(), dist, mark.c_str());
    listing << r + 1 << "\t" << pairs[static_cast<std::size_t>(j)].id << "\t" << dist << "\n";
  }
  listing.close();
  manifest.set_config(kv.values());
  manifest.add_output(fs::path(c.out) / "retrieval.tsv");
}

void ablate(const Command& c, const std::string& corpus_path, const std::string& artifacts, const std::string& rows,
            cli::RunManifest& manifest) {
  const KeyValueConfig kv = c.settings();
  const Loaded l = load_inputs(corpus_path, artifacts, manifest);
  int subset = 0, trials = 10;
  kv.read("subset_size", subset);
  kv.read("trials", trials);
  const trainer::TrainConfig base = train_config(kv, l);
  std::vector<std::string> grid;
  if (rows.empty()) {
    grid = trainer::standard_ablation_rows();
  } else {
    std::stringstream ss(rows);
    for (std::string r; std::getline(ss, r, ',');)
      if (!r.empty()) grid.push_back(r);
  }
  if (subset == 0) subset = static_cast<int>(l.prepared.test.size());
  const trainer::AblationTable table = trainer::run_ablation(grid, base, l.prepared.train, l.prepared.val,
                                                              l.prepared.test, l.data.categories.count(), subset, trials);
  fs::create_directories(c.out);
  std::ofstream(fs::path(c.out) / "ablation.json") << table.to_json() << "\n";
  std::ofstream(fs::path(c.out) / "ablation.md") << table.to_markdown();
  manifest.set_config(KeyValueConfig::parse(base.to_text()).values());
  manifest.add_seed("seed", base.seed);
  manifest.add_output(fs::path(c.out) / "ablation.json");
  manifest.add_output(fs::path(c.out) / "ablation.md");
  std::cout << table.to_markdown();
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_pattern("[%H:%M:%S] %v");
  CLI::App root{"SEJE recipe/image joint embedding toolkit"};
  root.require_subcommand(1);
  const std::vector<std::string> tkeys = train_keys();
  const std::vector<std::string> pkeys = pipeline::PreprocessConfig::keys();

  Command gen(root, "gen-data", "generate a synthetic recipe/image corpus", kGenKeys);
  Command pre(root, "preprocess", "train the Phase I models and rate key terms", pkeys);
  Command trn(root, "train", "train the joint embedding", tkeys);
  Command evl(root, "eval", "retrieval evaluation over sampled subsets", concat(kEvalKeys, {"seed"}), true);
  Command ret(root, "retrieve", "top-k cross-modal retrieval for one query", kEvalKeys);
  Command abl(root, "ablate", "train and evaluate a grid of ablation rows", concat(tkeys, kEvalKeys));

  std::string corpus_path, artifacts, model, embeddings, resume, image_query, recipe_query, rows;
  for (Command* c : {&pre, &trn, &evl, &ret, &abl}) c->app->add_option("--corpus", corpus_path, "corpus JSONL");
  for (Command* c : {&trn, &evl, &ret, &abl}) c->app->add_option("--artifacts", artifacts, "Phase I artifact directory");
  for (Command* c : {&evl, &ret}) c->app->add_option("--model", model, "joint model checkpoint");
  evl.app->add_option("--embeddings", embeddings, "JSONL of matched {recipe, image} embeddings");
  trn.app->add_option("--resume", resume, "trainer state checkpoint to continue from");
  ret.app->add_option("--query-image", image_query, "pair id whose image is the query");
  ret.app->add_option("--query-recipe", recipe_query, "pair id whose recipe is the query");
  abl.app->add_option("--rows", rows, "comma-separated rows, e.g. 'SEJE-b,SEJE-b+TRI'; default is the full grid");

  try {
    root.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = root.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string name;
  for (const Command* c : {&gen, &pre, &trn, &evl, &ret, &abl})
    if (c->parsed()) name = c->app->get_name();
  cli::RunManifest manifest(name, std::vector<std::string>(argv, argv + argc));
  try {
    if (gen.parsed()) {
      gen_data(gen, manifest);
      manifest.write(gen.out);
    } else if (pre.parsed()) {
      preprocess(pre, corpus_path, manifest);
      manifest.write(pre.out);
    } else if (trn.parsed()) {
      train(trn, corpus_path, artifacts, resume, manifest);
      manifest.write(trn.out);
    } else if (evl.parsed()) {
      evaluate(evl, corpus_path, artifacts, model, embeddings, manifest);
      manifest.write(evl.out);
    } else if (ret.parsed()) {
      retrieve(ret, corpus_path, artifacts, model, image_query, recipe_query, manifest);
      manifest.write(ret.out);
    } else if (abl.parsed()) {
      ablate(abl, corpus_path, artifacts, rows, manifest);
      manifest.write(abl.out);
    }
  } catch (const DivergenceError& e) {
    spdlog::error("{}", e.what());
    return 3;
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const SchemaError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
