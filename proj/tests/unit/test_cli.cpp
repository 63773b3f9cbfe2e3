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

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string output;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(SEJE_CLI) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path work(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "seje_test_cli" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kSmallCorpus = "--categories 3 --per-category 12 --image-size 16 --seed 5";
const std::string kFastPreprocess =
    "--tagger-epochs 3 --d-w 16 --cbow-epochs 2 --d-s 8 --sentence-embedding-dim 8 "
    "--sentence-decoder-hidden 8 --sentence-epochs 1 --classifier-epochs 2";
const std::string kFastTrain = "--epochs 2 --batch-size 8 --d 8 --lstm-hidden 8";

/// One small corpus with preprocessed artifacts, shared by the flow tests.
const fs::path& prepared_run() {
  static const fs::path dir = [] {
    const fs::path d = work("flow");
    EXPECT_EQ(run("gen-data --out " + d.string() + " " + kSmallCorpus).code, 0);
    const Result pre = run("preprocess --corpus " + (d / "corpus.jsonl").string() + " --out " + (d / "p1").string() +
                           " " + kFastPreprocess);
    EXPECT_EQ(pre.code, 0) << pre.output;
    return d;
  }();
  return dir;
}

TEST(Cli, GenDataIsReproducible) {
  const fs::path a = work("gen_a"), b = work("gen_b");
  ASSERT_EQ(run("gen-data --out " + a.string() + " " + kSmallCorpus).code, 0);
  ASSERT_EQ(run("gen-data --out " + b.string() + " " + kSmallCorpus).code, 0);
  EXPECT_EQ(slurp(a / "corpus.jsonl"), slurp(b / "corpus.jsonl"));
  const auto ma = nlohmann::json::parse(slurp(a / "manifest.json"));
  const auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
  EXPECT_EQ(ma["outputs"][0]["sha256"], mb["outputs"][0]["sha256"]);
  EXPECT_EQ(ma["outputs"][0]["sha256"].get<std::string>().size(), 64u);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("gen-data").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  const fs::path d = work("usage");
  EXPECT_EQ(run("preprocess --corpus " + (d / "missing.jsonl").string() + " --out " + d.string()).code, 2);
  EXPECT_EQ(run("gen-data --out " + d.string() + " --categories 0").code, 2);
  std::ofstream(d / "bad.cfg") << "not_a_key = 1\n";
  EXPECT_EQ(run("gen-data --out " + d.string() + " --config " + (d / "bad.cfg").string()).code, 2);
}

TEST(Cli, EvalOnPerfectCopyEmbeddings) {
  const fs::path d = work("eval");
  {
    std::ofstream os(d / "emb.jsonl");
    for (int i = 0; i < 20; ++i) {
      const nlohmann::json v = {i, i * i % 7, -i};
      os << nlohmann::json{{"recipe", v}, {"image", v}}.dump() << "\n";
    }
  }
  const Result r = run("eval --embeddings " + (d / "emb.jsonl").string() + " --out " + d.string() + " --trials 3");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("MedR 1.0"), std::string::npos) << r.output;
  const auto report = nlohmann::json::parse(slurp(d / "report.json"));
  EXPECT_TRUE(report.contains("image_to_recipe"));
  std::ofstream(d / "broken.jsonl") << "{\"recipe\": [1, 2]}\n";
  EXPECT_EQ(run("eval --embeddings " + (d / "broken.jsonl").string() + " --out " + d.string()).code, 2);
}

TEST(Cli, PreprocessTrainRetrieveAblate) {
  const fs::path& d = prepared_run();
  const std::string corpus = " --corpus " + (d / "corpus.jsonl").string();
  const std::string artifacts = " --artifacts " + (d / "p1").string();
  for (const char* f : {"extractor.ckpt", "keyterms.jsonl", "words.emb", "sentence_encoder.ckpt", "classifier.ckpt",
                        "split.json", "manifest.json"})
    EXPECT_TRUE(fs::exists(d / "p1" / f)) << f;

  const Result trn = run("train" + corpus + artifacts + " --out " + (d / "run").string() + " " + kFastTrain);
  ASSERT_EQ(trn.code, 0) << trn.output;
  for (const char* f : {"model.ckpt", "state.ckpt", "losses.jsonl", "history.jsonl", "manifest.json"})
    EXPECT_TRUE(fs::exists(d / "run" / f)) << f;

  const auto split = nlohmann::json::parse(slurp(d / "p1" / "split.json"));
  const std::string query = split["test"][0].get<std::string>();
  const Result ret = run("retrieve" + corpus + artifacts + " --model " + (d / "run" / "model.ckpt").string() +
                         " --query-image " + query + " --k 3 --out " + (d / "ret").string());
  ASSERT_EQ(ret.code, 0) << ret.output;
  std::ifstream listing(d / "ret" / "retrieval.tsv");
  int lines = 0;
  for (std::string l; std::getline(listing, l);) ++lines;
  EXPECT_EQ(lines, 3);

  const Result evl = run("eval" + corpus + artifacts + " --model " + (d / "run" / "model.ckpt").string() +
                         " --trials 2 --out " + (d / "eval").string());
  EXPECT_EQ(evl.code, 0) << evl.output;

  const Result abl = run("ablate" + corpus + artifacts + " --rows SEJE-b,SEJE-b+TRI --trials 2 --out " +
                         (d / "abl").string() + " " + kFastTrain);
  ASSERT_EQ(abl.code, 0) << abl.output;
  EXPECT_EQ(nlohmann::json::parse(slurp(d / "abl" / "ablation.json")).size(), 2u);
}

TEST(Cli, ResumeMatchesUninterruptedRun) {
  const fs::path& d = prepared_run();
  const std::string inputs = " --corpus " + (d / "corpus.jsonl").string() + " --artifacts " + (d / "p1").string();
  const std::string fast = " --batch-size 8 --d 8 --lstm-hidden 8";
  ASSERT_EQ(run("train" + inputs + " --epochs 3 --out " + (d / "full").string() + fast).code, 0);
  ASSERT_EQ(run("train" + inputs + " --epochs 1 --out " + (d / "half").string() + fast).code, 0);
  ASSERT_EQ(run("train" + inputs + " --epochs 3 --resume " + (d / "half" / "state.ckpt").string() + " --out " +
                (d / "resumed").string())
                .code,
            0);
  EXPECT_EQ(slurp(d / "resumed" / "losses.jsonl"), slurp(d / "full" / "losses.jsonl"));
  EXPECT_EQ(slurp(d / "resumed" / "model.ckpt"), slurp(d / "full" / "model.ckpt"));
}

TEST(Cli, DivergenceExitsThree) {
  const fs::path& d = prepared_run();
  const Result r = run("train --corpus " + (d / "corpus.jsonl").string() + " --artifacts " + (d / "p1").string() +
                       " --out " + (d / "diverge").string() + " " + kFastTrain + " --learning-rate 1e300");
  EXPECT_EQ(r.code, 3) << r.output;
}

}  // namespace
