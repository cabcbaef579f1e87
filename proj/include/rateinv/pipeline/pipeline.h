// include/rateinv/pipeline/pipeline.h

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

#ifndef RATEINV_PIPELINE_PIPELINE_H_
#define RATEINV_PIPELINE_PIPELINE_H_

// Experiment stages over one work directory:
//
//   synth      corpus/ wavs (or manifests of existing trees), data/{train,test}.tsv
//   augment    TSM copies, data/{train_all,test_all}.tsv, trials/
//   featurize  feats/{train,test}.{ark,idx}
//   train      model/final.ckpt, model/train.log, model/probes.tsv
//   extract    emb/{train,test}.emb
//   score      scores/<column>.scores, scores/eer.tsv
//   report     report/report.txt, report/report.svg
//
// Each stage records a stamp derived from the config sections it depends
// on and from its predecessor's stamp. A stage whose stamp is current is
// skipped; one whose predecessor is missing or stale fails with
// Error(kMissingStage) naming the stage to run.

#include <filesystem>
#include <string>
#include <vector>

#include "rateinv/backend/report.h"
#include "rateinv/pipeline/config.h"

namespace rateinv {

enum class Stage { kSynth = 0, kAugment, kFeaturize, kTrain, kExtract, kScore, kReport };
constexpr int kNumStages = 7;
const char *StageName(Stage s);
Stage ParseStage(const std::string &name);

struct RunOptions {
  bool deterministic = false;  // forces single-threaded numerics
  bool force = false;          // rerun even when the stamp is current
};

struct StageOutcome {
  Stage stage = Stage::kSynth;
  bool skipped = false;
  std::string stamp;
};

// Stamp the stage would carry under `cfg`.
std::string ExpectedStamp(const ExperimentConfig &cfg, Stage stage);

StageOutcome RunStage(Stage stage, const ExperimentConfig &cfg,
                      const std::filesystem::path &workdir, const RunOptions &opts = {});

// Runs every stage from synth through `last`.
std::vector<StageOutcome> RunPipeline(const ExperimentConfig &cfg,
                                      const std::filesystem::path &workdir,
                                      const RunOptions &opts = {}, Stage last = Stage::kReport);

// Table with one row per work directory (row name: its preset) from the
// score stage outputs. HI-MIA-protocol tables get an Average column.
ReportTable BuildReport(const std::vector<std::filesystem::path> &workdirs);

}  // namespace rateinv

#endif  // RATEINV_PIPELINE_PIPELINE_H_
