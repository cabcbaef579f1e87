// tests/pipeline-test.cc

// Copyright 2026  The rateinv Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rateinv/base/error.h"
#include "rateinv/pipeline/config.h"
#include "rateinv/pipeline/pipeline.h"
#include "test-util.h"

using namespace rateinv;
namespace fs = std::filesystem;

namespace {

const char *kTinyOverrides = R"(
corpus:
  train_speakers: 4
  test_speakers: 3
  train_utts: 3
  test_utts: 2
  min_duration: 1.0
  max_duration: 1.2
train:
  steps: 8
  batch_size: 4
  chunk_frames: 40
  max_phase_iters: 2
  min_phase_iters: 3
  probe_batch: 2
model:
  channels: 8
  embed_dim: 16
  cos_dim: 8
eval:
  alphas: [0.5, 1.0]
)";

ExperimentConfig Tiny(const std::string &preset) {
  return ParseConfig("preset: " + preset + "\n" + kTinyOverrides, "tiny.yaml");
}

std::string Slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string ConfigError(const std::string &yaml) {
  try {
    ParseConfig(yaml, "exp.yaml");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kConfig);
    return e.what();
  }
  FAIL("config accepted");
  return "";
}

ErrorKind KindOfStage(Stage s, const ExperimentConfig &cfg, const fs::path &dir, std::string *msg) {
  try {
    RunStage(s, cfg, dir);
  } catch (const Error &e) {
    *msg = e.what();
    return e.kind();
  }
  return ErrorKind::kArgument;
}

}  // namespace

TEST_CASE("every preset validates and round-trips through yaml") {
  for (const auto &name : PresetNames()) {
    INFO(name);
    auto c = PresetConfig(name);
    CHECK_NOTHROW(ValidateExperimentConfig(c));
    const auto text = DumpConfig(c);
    CHECK(DumpConfig(ParseConfig(text)) == text);
    CHECK(ParseConfig(text).preset == name);
  }
  CHECK_THROWS_AS(PresetConfig("s99"), Error);
}

TEST_CASE("preset semantics") {
  auto base = PresetConfig("baseline");
  CHECK(base.train.model.mode == DecompositionMode::kNone);
  CHECK(base.train.loss.lambda1 == 0.0);
  CHECK(base.train.loss.lambda2 == 0.0);
  CHECK(base.augment.plan == "none");
  auto full = PresetConfig("fd_al");
  CHECK(full.train.model.mode == DecompositionMode::kAttention);
  CHECK(full.train.loss.lambda1 == 0.1);
  CHECK(full.train.loss.lambda2 == 0.1);
  CHECK(full.train.max_phase_iters == 20);
  CHECK(full.augment.plan == "voxceleb");
  CHECK(PresetConfig("fd_att").train.loss.lambda2 == 0.0);
  CHECK(PresetConfig("al_cos").train.model.mode == DecompositionMode::kParallelProjection);
  CHECK(PresetConfig("s12").protocol == Protocol::kHimia);
  CHECK(PresetConfig("s7").corpus.train_rates == std::vector<double>{1.0});
}

TEST_CASE("config overrides and error locations") {
  auto c = ParseConfig("preset: baseline\nseed: 9\nloss:\n  am_margin: 0.3\n");
  CHECK(c.seed == 9);
  CHECK(c.train.loss.am_margin == 0.3);
  CHECK(c.train.model.mode == DecompositionMode::kNone);
  auto e1 = ConfigError("preset: fd_al\nmodel:\n  channels: 8\n  chanels: 4\n");
  CHECK(e1.find("exp.yaml:4") != std::string::npos);
  CHECK(e1.find("chanels") != std::string::npos);
  auto e2 = ConfigError("preset: fd_al\nloss:\n  lambda1: -1\n");
  CHECK(e2.find("exp.yaml:3") != std::string::npos);
  CHECK(e2.find("lambda1") != std::string::npos);
  auto e3 = ConfigError("preset: fd_al\nmodel:\n  decomposition: magic\n");
  CHECK(e3.find("attention") != std::string::npos);
  auto e4 = ConfigError("preset: fd_al\nbogus: 1\n");
  CHECK(e4.find("bogus") != std::string::npos);
  ConfigError("preset: fd_al\nmodel: [1, 2\n");
  ConfigError("preset: fd_al\ntrain:\n  chunk_frames: 5\n");
  ConfigError("preset: fd_al\naugment:\n  plan: uniform\n");
}

TEST_CASE("stage names") {
  for (int s = 0; s < kNumStages; ++s)
    CHECK(ParseStage(StageName(static_cast<Stage>(s))) == static_cast<Stage>(s));
  CHECK_THROWS_AS(ParseStage("deploy"), Error);
}

TEST_CASE("stamps skip current stages and invalidate downstream ones") {
  auto dir = testing::ScratchDir("pipeline");
  auto cfg = Tiny("fd_al");
  std::string msg;
  CHECK(KindOfStage(Stage::kTrain, cfg, dir, &msg) == ErrorKind::kMissingStage);
  CHECK(msg.find("featurize") != std::string::npos);

  auto first = RunPipeline(cfg, dir, {true, false});
  REQUIRE(first.size() == kNumStages);
  for (const auto &o : first) CHECK(!o.skipped);
  for (const char *f : {"config.yaml", "data/train_all.tsv", "trials/columns.txt",
                        "feats/train.ark", "model/final.ckpt", "model/train.log",
                        "model/probes.tsv", "emb/test.emb", "scores/eer.tsv",
                        "report/report.txt", "report/report.svg"})
    CHECK_MESSAGE(fs::exists(dir / f), f);
  const auto log = Slurp(dir / "model/train.log");
  CHECK(log.rfind("# step phase L_id L_rate L_cos total", 0) == 0);
  const auto report = Slurp(dir / "report/report.txt");
  CHECK(report.find("0.5") != std::string::npos);

  auto again = RunPipeline(cfg, dir, {true, false});
  for (const auto &o : again) CHECK(o.skipped);

  auto cosine = cfg;
  cosine.backend.backend = ScoringBackend::kCosine;
  auto third = RunPipeline(cosine, dir, {true, false});
  for (int s = 0; s < kNumStages; ++s)
    CHECK(third[s].skipped == (s < static_cast<int>(Stage::kScore)));

  auto reseeded = cosine;
  reseeded.seed = 2;
  CHECK(ExpectedStamp(reseeded, Stage::kSynth) != ExpectedStamp(cosine, Stage::kSynth));
  CHECK(ExpectedStamp(reseeded, Stage::kReport) != ExpectedStamp(cosine, Stage::kReport));

  RunStage(Stage::kFeaturize, cosine, dir, {true, true});
  CHECK(KindOfStage(Stage::kExtract, cosine, dir, &msg) == ErrorKind::kMissingStage);
  CHECK(msg.find("train") != std::string::npos);
}

TEST_CASE("deterministic runs reproduce the report; rate-class protocol adds an average") {
  auto a = testing::ScratchDir("det-a"), b = testing::ScratchDir("det-b");
  auto cfg = Tiny("s12");
  RunPipeline(cfg, a, {true, false});
  RunPipeline(cfg, b, {true, false});
  CHECK(Slurp(a / "report/report.txt") == Slurp(b / "report/report.txt"));
  CHECK(Slurp(a / "scores/eer.tsv") == Slurp(b / "scores/eer.tsv"));
  auto table = BuildReport({a, b});
  CHECK(table.systems.size() == 2);
  CHECK(table.columns.back() == "Average");
  CHECK(table.columns.size() == 4);
}
