// include/rateinv/feat/vad-cmn.h

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

#ifndef RATEINV_FEAT_VAD_CMN_H_
#define RATEINV_FEAT_VAD_CMN_H_

#include <span>
#include <vector>

#include "rateinv/feat/feature-matrix.h"

namespace rateinv {

struct VadOptions {
  // Frame kept when log_energy > mean(log_energy) + relative_offset and
  // log_energy > absolute_floor (both in nats).
  double relative_offset = -1.5;
  double absolute_floor = -13.8;  // ~ log(1e-6)
};

// Per-frame keep mask. Throws Error(kEmptyAfterVad) if no frame survives
// and kTooShort for an empty input.
std::vector<bool> EnergyVad(std::span<const float> log_energy, const VadOptions &opts = {});

// Deletes the rows whose mask entry is false.
FeatureMatrix ApplyMask(const FeatureMatrix &features, const std::vector<bool> &mask);

// Sliding-window cepstral mean normalization. Frame t uses the window
// [t - window/2, t - window/2 + window), shifted to lie inside the
// utterance and truncated only when the utterance is shorter than the
// window (which then reduces to global mean subtraction).
FeatureMatrix SlidingCmn(const FeatureMatrix &features, int window = 300);

}  // namespace rateinv

#endif  // RATEINV_FEAT_VAD_CMN_H_
