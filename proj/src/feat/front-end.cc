// src/feat/front-end.cc

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

#include "rateinv/feat/front-end.h"

namespace rateinv {

FeatureMatrix ExtractFeatures(MfccComputer &mfcc, const AudioClip &clip,
                              const std::string &utt_id, const FrontEndOptions &opts) {
  MfccOutput raw = mfcc.Compute(clip);
  raw.features.utt_id = utt_id;
  const auto mask = EnergyVad(raw.log_energy, opts.vad);
  return SlidingCmn(ApplyMask(raw.features, mask), opts.cmn_window);
}

}  // namespace rateinv
