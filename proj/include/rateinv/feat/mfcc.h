// include/rateinv/feat/mfcc.h

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

#ifndef RATEINV_FEAT_MFCC_H_
#define RATEINV_FEAT_MFCC_H_

#include <complex>
#include <memory>
#include <vector>

#include "rateinv/corpus/audio.h"
#include "rateinv/feat/feature-matrix.h"

namespace rateinv {

struct MfccOptions {
  int sample_rate = 16000;
  int frame_length = 400;   // 25 ms
  int frame_shift = 160;    // 10 ms
  double preemph = 0.97;
  int fft_size = 512;
  int num_mel_bins = 40;
  double low_freq = 20.0;
  double high_freq = 7600.0;
  int num_ceps = 40;        // all cepstra kept, C0 included
  bool remove_dc_offset = true;
  double energy_floor = 1e-10;  // floor applied before every log
};

struct MfccOutput {
  FeatureMatrix features;
  // log of the raw frame energy (after DC removal, before pre-emphasis and
  // windowing); input to the energy VAD.
  std::vector<float> log_energy;
};

// floor((num_samples - frame_length) / frame_shift) + 1, or 0 if too short.
std::size_t NumFrames(std::size_t num_samples, const MfccOptions &opts);

// Precomputes window, mel bank and DCT; reusable across utterances but not
// shareable between threads.
class MfccComputer {
 public:
  explicit MfccComputer(const MfccOptions &opts = {});
  ~MfccComputer();
  MfccComputer(const MfccComputer &) = delete;
  MfccComputer &operator=(const MfccComputer &) = delete;

  // Errors: sample rate differs from the configured one -> kArgument (no
  // implicit resampling); fewer than frame_length samples -> kTooShort.
  MfccOutput Compute(const AudioClip &clip);

  const MfccOptions &options() const { return opts_; }
  // num_mel_bins x (fft_size / 2 + 1), row-major.
  const std::vector<double> &MelBank() const { return mel_bank_; }

 private:
  struct FftState;
  MfccOptions opts_;
  std::vector<double> window_;
  std::vector<double> mel_bank_;
  std::vector<double> dct_;  // num_ceps x num_mel_bins
  std::unique_ptr<FftState> fft_;
};

double MelScale(double hz);

}  // namespace rateinv

#endif  // RATEINV_FEAT_MFCC_H_
