// src/feat/mfcc.cc

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

#include "rateinv/feat/mfcc.h"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rateinv/base/error.h"
#include "rateinv/kernels/kernels.h"

namespace rateinv {

struct MfccComputer::FftState {
  Eigen::FFT<double> fft;
  std::vector<double> frame;
  std::vector<std::complex<double>> spectrum;
};

double MelScale(double hz) { return 1127.0 * std::log(1.0 + hz / 700.0); }

std::size_t NumFrames(std::size_t num_samples, const MfccOptions &opts) {
  if (num_samples < static_cast<std::size_t>(opts.frame_length)) return 0;
  return (num_samples - opts.frame_length) / opts.frame_shift + 1;
}

MfccComputer::MfccComputer(const MfccOptions &opts)
    : opts_(opts), fft_(std::make_unique<FftState>()) {
  if (opts.frame_length <= 0 || opts.frame_shift <= 0 || opts.fft_size < opts.frame_length ||
      opts.num_mel_bins <= 0 || opts.num_ceps <= 0 || opts.num_ceps > opts.num_mel_bins)
    Fail(ErrorKind::kArgument, "inconsistent MFCC options");
  const double nyquist = opts.sample_rate / 2.0;
  if (!(opts.low_freq >= 0 && opts.high_freq > opts.low_freq && opts.high_freq <= nyquist))
    Fail(ErrorKind::kArgument, "mel bank bounds must satisfy 0 <= low < high <= Nyquist");

  // Periodic Hamming window.
  window_.resize(opts.frame_length);
  for (int i = 0; i < opts.frame_length; ++i)
    window_[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / opts.frame_length);

  const int num_bins = opts.fft_size / 2 + 1;
  const double mel_low = MelScale(opts.low_freq), mel_high = MelScale(opts.high_freq);
  const double mel_delta = (mel_high - mel_low) / (opts.num_mel_bins + 1);
  mel_bank_.assign(static_cast<std::size_t>(opts.num_mel_bins) * num_bins, 0.0);
  for (int m = 0; m < opts.num_mel_bins; ++m) {
    const double left = mel_low + m * mel_delta, center = left + mel_delta,
                 right = center + mel_delta;
    for (int b = 0; b < num_bins; ++b) {
      const double mel = MelScale(b * static_cast<double>(opts.sample_rate) / opts.fft_size);
      double w = 0.0;
      if (mel > left && mel <= center) w = (mel - left) / (center - left);
      else if (mel > center && mel < right) w = (right - mel) / (right - center);
      mel_bank_[static_cast<std::size_t>(m) * num_bins + b] = w;
    }
  }

  // Orthonormal DCT-II.
  const int M = opts.num_mel_bins;
  dct_.resize(static_cast<std::size_t>(opts.num_ceps) * M);
  for (int k = 0; k < opts.num_ceps; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / M) : std::sqrt(2.0 / M);
    for (int m = 0; m < M; ++m)
      dct_[static_cast<std::size_t>(k) * M + m] =
          scale * std::cos(std::numbers::pi * k * (m + 0.5) / M);
  }

  fft_->fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  fft_->frame.assign(opts.fft_size, 0.0);
}

MfccComputer::~MfccComputer() = default;

MfccOutput MfccComputer::Compute(const AudioClip &clip) {
  if (clip.sample_rate != opts_.sample_rate)
    Fail(ErrorKind::kArgument, "MFCC expects " + std::to_string(opts_.sample_rate) +
                                   " Hz audio, got " + std::to_string(clip.sample_rate));
  const std::size_t frames = NumFrames(clip.samples.size(), opts_);
  if (frames == 0) Fail(ErrorKind::kTooShort, "clip shorter than one 25 ms analysis frame");

  const int len = opts_.frame_length, num_bins = opts_.fft_size / 2 + 1;
  MfccOutput out;
  out.features = FeatureMatrix(frames, opts_.num_ceps);
  out.log_energy.resize(frames);
  std::vector<double> frame(len), power(num_bins), mel(opts_.num_mel_bins),
      ceps(opts_.num_ceps);
  auto &buf = fft_->frame;
  for (std::size_t f = 0; f < frames; ++f) {
    const float *src = clip.samples.data() + f * opts_.frame_shift;
    for (int i = 0; i < len; ++i) frame[i] = src[i];
    if (opts_.remove_dc_offset) {
      double mean = 0.0;
      for (double v : frame) mean += v;
      mean /= len;
      for (double &v : frame) v -= mean;
    }
    const double energy = kernels::Dot(frame, frame);
    out.log_energy[f] = static_cast<float>(std::log(std::max(energy, opts_.energy_floor)));
    for (int i = len - 1; i > 0; --i) frame[i] -= opts_.preemph * frame[i - 1];
    frame[0] -= opts_.preemph * frame[0];
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int i = 0; i < len; ++i) buf[i] = frame[i] * window_[i];
    fft_->fft.fwd(fft_->spectrum, buf);
    for (int b = 0; b < num_bins; ++b) power[b] = std::norm(fft_->spectrum[b]);
    kernels::MatVec(mel_bank_, opts_.num_mel_bins, num_bins, power, mel);
    for (double &e : mel) e = std::log(std::max(e, opts_.energy_floor));
    kernels::MatVec(dct_, opts_.num_ceps, opts_.num_mel_bins, mel, ceps);
    auto row = out.features.Row(f);
    for (int k = 0; k < opts_.num_ceps; ++k) row[k] = static_cast<float>(ceps[k]);
  }
  return out;
}

}  // namespace rateinv
