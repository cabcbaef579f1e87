// include/rateinv/trainer/trainer.h

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

#ifndef RATEINV_TRAINER_TRAINER_H_
#define RATEINV_TRAINER_TRAINER_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rateinv/corpus/manifest.h"
#include "rateinv/feat/feature-matrix.h"
#include "rateinv/losses/losses.h"
#include "rateinv/model/params.h"
#include "rateinv/trainer/schedule.h"

namespace rateinv {

// One training example: a feature chunk with its speaker and rate indices.
struct TrainExample {
  FeatureMatrix features;
  int speaker = 0;
  int rate = 0;
};

struct TrainingUtterance {
  std::string utt_id;
  FeatureMatrix features;
  int speaker = 0;
  int rate = 0;
};

struct TrainingSet {
  std::vector<std::string> speakers;  // index -> speaker id, sorted
  std::vector<TrainingUtterance> utterances;
};

// Joins manifest rows with their features. Utterances with no features or
// fewer frames than `min_frames` are dropped with a warning.
TrainingSet BuildTrainingSet(const std::vector<UtteranceRecord> &manifest,
                             const std::map<std::string, FeatureMatrix> &features,
                             int min_frames);

// Batch means of the loss terms; total is always L_id + l1 L_rate + l2 L_cos.
struct StepMetrics {
  long step = 0;
  Phase phase = Phase::kMinimize;
  double l_id = 0, l_rate = 0, l_cos = 0, total = 0;
};

// Evaluates the batch-mean losses. When grad is non-null it is overwritten
// with the gradient of the phase objective: -L_cos (maximize) or the total
// loss (minimize). Per-example gradients are computed independently (on up
// to num_threads threads) and summed in example order, so the result does
// not depend on the thread count.
StepMetrics EvaluateBatch(const ModelParams &params, const std::vector<TrainExample> &batch,
                          const LossConfig &loss, Phase phase, ModelParams *grad,
                          int num_threads = 1);

// Groups a phase may modify.
GroupMask PhaseMask(Phase phase);

// SGD with momentum: v = mu v + g; p -= lr[group] v. Only groups in the
// mask are touched (parameters and buffers). The id head is renormalized
// after it is updated.
class SgdOptimizer {
 public:
  SgdOptimizer(const ModelParams &shape, const std::array<double, kNumParamGroups> &lr,
               double momentum);
  void Apply(const ModelParams &grad, const GroupMask &mask, ModelParams *params);

  const ModelParams &momentum_buffers() const { return velocity_; }
  ModelParams &momentum_buffers() { return velocity_; }
  long step() const { return step_; }
  void set_step(long s) { step_ = s; }

 private:
  std::array<double, kNumParamGroups> lr_;
  double momentum_;
  ModelParams velocity_;
  long step_ = 0;
};

StepMetrics TrainStepMax(const std::vector<TrainExample> &batch, const LossConfig &loss,
                         ModelParams *params, SgdOptimizer *opt, int num_threads = 1);
StepMetrics TrainStepMin(const std::vector<TrainExample> &batch, const LossConfig &loss,
                         ModelParams *params, SgdOptimizer *opt, int num_threads = 1);

struct TrainerOptions {
  ModelConfig model;
  LossConfig loss;
  int max_phase_iters = 20;
  int min_phase_iters = 50;
  long steps = 140;
  int batch_size = 16;
  int chunk_frames = 200;
  // encoder, attention, id head, rate head, cosine map
  std::array<double, kNumParamGroups> learning_rates{0.01, 0.01, 0.01, 0.01, 0.01};
  double momentum = 0.9;
  int num_threads = 1;
  int probe_batch = 16;        // fixed evaluation batch for phase probes
  long checkpoint_every = 0;   // 0: only the final checkpoint
  bool check_rate_classes = true;
};

// Adversarial training is active iff lambda2 > 0.
AdversarialSchedule MakeSchedule(const TrainerOptions &opts);

// Fixed-batch losses at the first and last step boundary of one phase.
struct PhaseProbe {
  Phase phase = Phase::kMaximize;
  long first_step = 0, end_step = 0;  // [first_step, end_step)
  StepMetrics start, end;
};

struct TrainResult {
  ModelParams params;
  std::vector<StepMetrics> log;
  std::vector<PhaseProbe> probes;
};

// One metrics line: "step phase L_id L_rate L_cos total".
std::string FormatMetrics(const StepMetrics &m);

// Full training loop. Writes a log line per step to `log` (if non-null) and
// checkpoints to `checkpoint_path` (if non-empty). `init` warm-starts from
// existing parameters; tensors whose shapes differ (e.g. a new speaker
// count) are freshly initialized. Throws Error(kConfig) when fewer than two
// speakers are present or, with lambda1 > 0, a rate class is missing; and
// Error(kNumerical) on a non-finite loss, after saving the last good
// parameters to `checkpoint_path`.
TrainResult RunTraining(const TrainingSet &data, const TrainerOptions &opts, uint64_t seed,
                        std::ostream *log = nullptr, const std::string &checkpoint_path = "",
                        const ModelParams *init = nullptr);

struct Accuracy {
  double id = 0.0, rate = 0.0;
};
// Classification accuracy of the id head on x_id and the rate head on
// x_rate, full-utterance forward.
Accuracy EvaluateAccuracy(const ModelParams &params, const TrainingSet &data);

}  // namespace rateinv

#endif  // RATEINV_TRAINER_TRAINER_H_
