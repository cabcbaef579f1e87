// include/rateinv/corpus/trials.h

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

#ifndef RATEINV_CORPUS_TRIALS_H_
#define RATEINV_CORPUS_TRIALS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rateinv/corpus/manifest.h"

namespace rateinv {

struct Trial {
  std::string enroll_utt;
  std::string test_utt;
  bool is_target = false;
};

using TrialList = std::vector<Trial>;

// Selects utterances either by rate label or by a specific alpha value.
struct RateSelector {
  std::optional<RateLabel> label;
  std::optional<double> alpha;

  static RateSelector Label(RateLabel l) { return {l, std::nullopt}; }
  static RateSelector Alpha(double a) { return {std::nullopt, a}; }
  bool Matches(const UtteranceRecord &r) const;
  std::string ToString() const;
};

// Full cross product of enrollment utterances (matching `enroll`) and test
// utterances (matching `test`). Pairs that share a source recording (an
// utterance and its own time-stretched copy, or the utterance with itself)
// are excluded. Throws Error(kEmptyTrials) when the manifest has fewer than
// two speakers, a selector matches nothing, or the result lacks either a
// target or an impostor trial.
TrialList MakeTrials(const std::vector<UtteranceRecord> &manifest,
                     const RateSelector &enroll, const RateSelector &test);

// Line format: enroll_utt<SP>test_utt<SP>target|nontarget
void WriteTrials(const std::filesystem::path &file, const TrialList &trials);
TrialList ReadTrials(const std::filesystem::path &file);

}  // namespace rateinv

#endif  // RATEINV_CORPUS_TRIALS_H_
