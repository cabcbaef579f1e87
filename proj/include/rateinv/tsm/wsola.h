// include/rateinv/tsm/wsola.h

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

#ifndef RATEINV_TSM_WSOLA_H_
#define RATEINV_TSM_WSOLA_H_

#include <span>
#include <vector>

#include "rateinv/corpus/audio.h"

namespace rateinv {

constexpr double kMinAlpha = 0.5;
constexpr double kMaxAlpha = 2.0;

struct TsmOptions {
  int frame_length = 1024;      // 64 ms at 16 kHz
  int synthesis_hop = 256;      // frame_length / 4
  int search_tolerance = 256;   // 16 ms at 16 kHz
};

// Periodic Hann window of the given length.
std::vector<float> TsmWindow(int frame_length);

// Checks 0 < synthesis_hop <= frame_length, search_tolerance >= 0, and that
// the window overlap-added at the synthesis hop has a strictly positive
// envelope. Throws Error(kArgument).
void ValidateTsmOptions(const TsmOptions &opts);

// Returns the offset k in [-tolerance, tolerance] for which
// region[tolerance + k, tolerance + k + reference.size()) has the highest
// normalized cross-correlation with `reference`. Ties go to the smallest
// |k| (negative first); an all-zero region or reference yields 0.
// `region` must hold at least reference.size() + 2 * tolerance samples.
int WsolaAlign(std::span<const float> reference, std::span<const float> region,
               int tolerance);

// Waveform-similarity overlap-add time-scale modification. alpha > 1 makes
// speech faster (shorter); output length is round(len / alpha) and pitch is
// preserved. alpha == 1 returns the input unchanged.
// Errors: alpha outside [0.5, 2.0] -> kRange; clip shorter than one frame
// -> kTooShort.
AudioClip TimeStretch(const AudioClip &clip, double alpha,
                      const TsmOptions &opts = {});

// Plain time warp x(alpha t) by linear interpolation. Changes pitch by the
// factor alpha; kept as the control path that TSM must beat.
AudioClip NaiveResample(const AudioClip &clip, double alpha);

}  // namespace rateinv

#endif  // RATEINV_TSM_WSOLA_H_
