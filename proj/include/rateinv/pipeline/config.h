// include/rateinv/pipeline/config.h

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

#ifndef RATEINV_PIPELINE_CONFIG_H_
#define RATEINV_PIPELINE_CONFIG_H_

// Experiment configuration. A YAML file selects a preset (one of the
// system analogs below) and may override any field. Unknown keys and
// out-of-range values are rejected with the file line of the offending
// field.
//
//   VoxCeleb-style protocol (train on originals + TSM copies, enroll at
//   alpha = 1, test at each alpha of eval.alphas):
//     baseline  plain x-vector, originals only
//     tsm_aug   plain x-vector, TSM augmentation
//     fd_att    attention decomposition, lambda2 = 0
//     al_cos    two parallel projections + cosine adversarial loss
//     fd_al     attention decomposition + cosine adversarial loss
//   HI-MIA-style protocol (speakers recorded at three natural rates, trials
//   within each rate):
//     s6 all rates | s7 normal only | s9 normal + TSM 0.8-1.2 |
//     s10 fd_att | s11 al_cos | s12 fd_al (s10-s12 on all rates)

#include <cstdint>
#include <string>
#include <vector>

#include "rateinv/backend/scoring.h"
#include "rateinv/feat/front-end.h"
#include "rateinv/trainer/trainer.h"
#include "rateinv/tsm/wsola.h"

namespace rateinv {

enum class Protocol { kVoxceleb, kHimia };

struct CorpusConfig {
  // Existing speaker/utt.wav trees; empty means synthesize.
  std::string train_dir, test_dir;
  int train_speakers = 20, test_speakers = 10;
  int train_utts = 8, test_utts = 4;  // per speaker and per rate
  double min_duration = 2.0, max_duration = 3.0;
  double syllable_rate = 4.0;
  // Speaking-rate factors synthesized for training (HI-MIA protocol; the
  // VoxCeleb protocol trains on rate 1.0 only).
  std::vector<double> train_rates{0.7, 1.0, 1.4};
  std::vector<double> test_rates{0.7, 1.0, 1.4};  // HI-MIA protocol
};

struct AugmentConfig {
  std::string plan = "voxceleb";  // none | voxceleb | uniform
  std::vector<double> alphas;     // uniform plan only
  double fraction = 0.5;          // uniform plan only
  TsmOptions tsm;
};

struct ExperimentConfig {
  std::string preset = "fd_al";
  Protocol protocol = Protocol::kVoxceleb;
  uint64_t seed = 1;
  int threads = 1;
  CorpusConfig corpus;
  AugmentConfig augment;
  FrontEndOptions features;
  TrainerOptions train;
  std::string init_checkpoint;  // warm start
  ScoringOptions backend;
  std::vector<double> eval_alphas;  // VoxCeleb protocol test scales
};

const std::vector<std::string> &PresetNames();

// Defaults of a preset; Error(kConfig) for an unknown name.
ExperimentConfig PresetConfig(const std::string &preset);

// Parses YAML text; `source` names the file in error messages.
ExperimentConfig ParseConfig(const std::string &yaml_text, const std::string &source = "<config>");
ExperimentConfig LoadConfig(const std::string &path);

// Full resolved configuration as YAML; ParseConfig(DumpConfig(c)) == c.
std::string DumpConfig(const ExperimentConfig &cfg);

// Canonical text of the named top-level sections ("corpus", "augment",
// "features", "model", "loss", "train", "backend", "eval", plus "seed",
// "protocol" and "init_checkpoint"); used for stage hashes.
std::string ConfigSections(const ExperimentConfig &cfg, const std::vector<std::string> &names);

// Semantic checks shared by the parser and programmatic callers.
void ValidateExperimentConfig(const ExperimentConfig &cfg);

}  // namespace rateinv

#endif  // RATEINV_PIPELINE_CONFIG_H_
