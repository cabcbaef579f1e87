// include/rateinv/corpus/synth.h

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

#ifndef RATEINV_CORPUS_SYNTH_H_
#define RATEINV_CORPUS_SYNTH_H_

#include <array>
#include <cstdint>

#include "rateinv/corpus/audio.h"

namespace rateinv {

// Parametric stand-in for a real speaker: a glottal pitch and a vocal-tract
// formant structure.
struct SynthSpeakerProfile {
  double f0 = 150.0;                                   // Hz, [100, 300]
  std::array<double, 3> formant_centers{600, 1500, 2600};     // Hz
  std::array<double, 3> formant_bandwidths{80, 120, 180};     // Hz
  uint64_t seed = 0;
};

// Throws Error(kArgument) if f0 is outside [100, 300] or any formant is
// not below the Nyquist frequency.
void ValidateProfile(const SynthSpeakerProfile &profile,
                     int sample_rate = kDefaultSampleRate);

// Draws a random profile; deterministic in `seed`.
SynthSpeakerProfile MakeSpeakerProfile(uint64_t seed);

// Syllable-structured voiced speech: a harmonic source at profile.f0 whose
// harmonic amplitudes follow the formant resonances of a vowel sequence,
// gated by a syllable envelope at `syllable_rate`, plus a low noise floor.
// duration in [0.5, 10] s, syllable_rate in [1, 10] Hz, else kArgument.
// Output length is exactly round(duration * sample_rate); bitwise
// deterministic in (profile, seed).
AudioClip SynthUtterance(const SynthSpeakerProfile &profile, double duration,
                         double syllable_rate, uint64_t seed,
                         int sample_rate = kDefaultSampleRate);

}  // namespace rateinv

#endif  // RATEINV_CORPUS_SYNTH_H_
