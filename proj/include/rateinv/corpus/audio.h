// include/rateinv/corpus/audio.h

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

#ifndef RATEINV_CORPUS_AUDIO_H_
#define RATEINV_CORPUS_AUDIO_H_

#include <filesystem>
#include <vector>

namespace rateinv {

constexpr int kDefaultSampleRate = 16000;

// Mono waveform, amplitudes nominally in [-1, 1].
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = kDefaultSampleRate;
  // 1.0 for original recordings; the time-scale factor for stretched copies.
  double source_alpha = 1.0;

  std::size_t size() const { return samples.size(); }
  double Duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Throws Error(kArgument) if the clip breaks the AudioClip invariants
// (empty, non-positive rate, non-finite samples).
void ValidateClip(const AudioClip &clip);

// Reads a RIFF/WAVE PCM16 mono file. Samples are divided by 32768.
// Malformed headers raise kFormat; stereo or non-16-bit data raise
// kUnsupportedFormat (no silent downmix).
AudioClip LoadWav(const std::filesystem::path &path);

// Writes PCM16 mono. Samples are scaled by 32768, rounded and clipped to
// the int16 range.
void SaveWav(const std::filesystem::path &path, const AudioClip &clip);

struct WavInfo {
  int sample_rate = 0;
  int num_channels = 0;
  int bits_per_sample = 0;
  std::size_t num_samples = 0;
};

// Parses and checks only the header; cheap way to validate a file.
WavInfo ProbeWav(const std::filesystem::path &path);

}  // namespace rateinv

#endif  // RATEINV_CORPUS_AUDIO_H_
