// include/rateinv/feat/front-end.h

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

#ifndef RATEINV_FEAT_FRONT_END_H_
#define RATEINV_FEAT_FRONT_END_H_

#include <string>

#include "rateinv/feat/mfcc.h"
#include "rateinv/feat/vad-cmn.h"

namespace rateinv {

struct FrontEndOptions {
  MfccOptions mfcc;
  VadOptions vad;
  int cmn_window = 300;  // 3 s
};

// MFCC, energy VAD (row deletion), then sliding CMN.
FeatureMatrix ExtractFeatures(MfccComputer &mfcc, const AudioClip &clip,
                              const std::string &utt_id, const FrontEndOptions &opts);

}  // namespace rateinv

#endif  // RATEINV_FEAT_FRONT_END_H_
