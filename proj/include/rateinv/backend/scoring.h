// include/rateinv/backend/scoring.h

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

#ifndef RATEINV_BACKEND_SCORING_H_
#define RATEINV_BACKEND_SCORING_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rateinv/backend/eer.h"
#include "rateinv/backend/embeddings.h"
#include "rateinv/backend/plda.h"
#include "rateinv/corpus/manifest.h"
#include "rateinv/corpus/trials.h"

namespace rateinv {

enum class ScoringBackend { kPlda, kCosine };
const char *ScoringBackendName(ScoringBackend b);
ScoringBackend ParseScoringBackend(const std::string &name);

struct ScoringOptions {
  ScoringBackend backend = ScoringBackend::kPlda;
  bool length_norm = true;
  PldaOptions plda;
};

// Backend trained on labeled embeddings (PLDA) or a plain cosine scorer.
class TrialScorer {
 public:
  // `train` supplies the PLDA training data grouped by the manifest speaker
  // ids; unused for the cosine backend.
  TrialScorer(const ScoringOptions &opts, const EmbeddingSet &train,
              const std::vector<UtteranceRecord> &train_manifest);
  double Score(const std::vector<double> &enroll, const std::vector<double> &test) const;

 private:
  ScoringOptions opts_;
  std::optional<EmbeddingPreprocessor> pre_;
  std::optional<PldaScorer> plda_;
};

struct ScoredTrial {
  Trial trial;
  double score = 0.0;
};

// Trials whose embeddings are missing are skipped; their count is returned
// through `missing` when non-null.
std::vector<ScoredTrial> ScoreTrials(const TrialScorer &scorer, const EmbeddingSet &embeddings,
                                     const TrialList &trials, std::size_t *missing = nullptr);

EerResult EerFromScores(const std::vector<ScoredTrial> &scores);

// "enroll test score" lines. Target flags are not stored; ReadScores takes
// them from `trials` and throws Error(kFormat) for a pair it does not list.
void WriteScores(const std::filesystem::path &file, const std::vector<ScoredTrial> &scores);
std::vector<ScoredTrial> ReadScores(const std::filesystem::path &file, const TrialList &trials);

}  // namespace rateinv

#endif  // RATEINV_BACKEND_SCORING_H_
