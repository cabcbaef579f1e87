// src/corpus/synth.cc

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

#include "rateinv/corpus/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "rateinv/base/error.h"

namespace rateinv {

namespace {

// Formant multipliers (F1, F2, F3) for a handful of vowel qualities.
constexpr std::array<std::array<double, 3>, 5> kVowels = {{
    {1.35, 1.00, 1.00},  // a
    {0.55, 1.45, 1.10},  // i
    {0.60, 0.60, 0.95},  // u
    {0.90, 1.30, 1.05},  // e
    {0.90, 0.70, 0.95},  // o
}};

constexpr std::array<double, 3> kFormantGain = {1.0, 0.7, 0.4};

struct Syllable {
  double start = 0, length = 0;  // seconds
  double gain = 1, f0_scale = 1;
  int vowel_from = 0, vowel_to = 0;
};

double RaisedCosineEnvelope(double x, double attack, double decay) {
  // x in [0, 1] across the voiced part of a syllable.
  if (x < 0.0 || x > 1.0) return 0.0;
  if (x < attack) return 0.5 - 0.5 * std::cos(std::numbers::pi * x / attack);
  if (x > 1.0 - decay)
    return 0.5 - 0.5 * std::cos(std::numbers::pi * (1.0 - x) / decay);
  return 1.0;
}

}  // namespace

void ValidateProfile(const SynthSpeakerProfile &profile, int sample_rate) {
  const double nyquist = sample_rate / 2.0;
  if (!(profile.f0 >= 100.0 && profile.f0 <= 300.0))
    Fail(ErrorKind::kArgument, "profile f0 must be in [100, 300] Hz");
  for (int i = 0; i < 3; ++i) {
    if (!(profile.formant_centers[i] > 0.0 && profile.formant_centers[i] < nyquist))
      Fail(ErrorKind::kArgument, "formant center outside (0, Nyquist)");
    if (!(profile.formant_bandwidths[i] > 0.0 && profile.formant_bandwidths[i] < nyquist))
      Fail(ErrorKind::kArgument, "formant bandwidth outside (0, Nyquist)");
  }
}

SynthSpeakerProfile MakeSpeakerProfile(uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  SynthSpeakerProfile p;
  p.seed = seed;
  p.f0 = uniform(100.0, 300.0);
  p.formant_centers = {uniform(450, 750), uniform(1100, 1800), uniform(2300, 3100)};
  p.formant_bandwidths = {uniform(60, 110), uniform(80, 150), uniform(120, 220)};
  return p;
}

AudioClip SynthUtterance(const SynthSpeakerProfile &profile, double duration,
                         double syllable_rate, uint64_t seed, int sample_rate) {
  if (!(duration >= 0.5 && duration <= 10.0))
    Fail(ErrorKind::kArgument, "synth duration must be in [0.5, 10] s");
  if (!(syllable_rate >= 1.0 && syllable_rate <= 10.0))
    Fail(ErrorKind::kArgument, "syllable rate must be in [1, 10] Hz");
  if (sample_rate <= 0) Fail(ErrorKind::kArgument, "sample rate must be positive");
  ValidateProfile(profile, sample_rate);

  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull ^ profile.seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  std::normal_distribution<double> gauss(0.0, 1.0);

  const std::size_t n = static_cast<std::size_t>(std::llround(duration * sample_rate));
  const double nyquist = sample_rate / 2.0;

  // Per-utterance vocal-tract jitter keeps same-speaker clips non-identical.
  std::array<double, 3> formants = profile.formant_centers;
  for (auto &f : formants) f *= uniform(0.97, 1.03);

  std::vector<Syllable> syllables;
  double t = uniform(0.05, 0.15);
  while (t < duration) {
    const double period = uniform(0.8, 1.2) / syllable_rate;
    Syllable s;
    s.start = t;
    s.length = period * uniform(0.55, 0.75);
    s.gain = uniform(0.6, 1.0);
    s.f0_scale = 1.0 + uniform(-0.012, 0.012);
    s.vowel_from = static_cast<int>(rng() % kVowels.size());
    s.vowel_to = static_cast<int>(rng() % kVowels.size());
    syllables.push_back(s);
    t += period;
  }

  const int max_harmonics = static_cast<int>(std::floor(0.9 * nyquist / (profile.f0 * 0.98)));
  std::vector<double> phase(max_harmonics + 1, 0.0);
  std::vector<double> amp(max_harmonics + 1, 0.0);
  const int block = 32;  // samples between amplitude updates

  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.assign(n, 0.0f);
  std::size_t syl = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double time = static_cast<double>(i) / sample_rate;
    while (syl < syllables.size() && time > syllables[syl].start + syllables[syl].length)
      ++syl;
    double voiced = 0.0;
    if (syl < syllables.size() && time >= syllables[syl].start) {
      const Syllable &s = syllables[syl];
      const double x = (time - s.start) / s.length;
      const double env = s.gain * RaisedCosineEnvelope(x, 0.2, 0.3);
      const double f0 = profile.f0 * s.f0_scale;
      if (i % block == 0 || amp[1] == 0.0) {
        // Diphthong-like glide between two vowel targets.
        std::array<double, 3> fc;
        for (int k = 0; k < 3; ++k) {
          const double from = kVowels[s.vowel_from][k], to = kVowels[s.vowel_to][k];
          fc[k] = formants[k] * (from + (to - from) * x);
        }
        for (int h = 1; h <= max_harmonics; ++h) {
          const double fh = h * f0;
          double shape = 0.35;
          for (int k = 0; k < 3; ++k) {
            const double d = (fh - fc[k]) / profile.formant_bandwidths[k];
            shape += kFormantGain[k] / (1.0 + d * d);
          }
          amp[h] = fh < 0.9 * nyquist ? std::pow(h, -1.5) * shape : 0.0;
        }
        amp[1] += 1.0;
      }
      for (int h = 1; h <= max_harmonics; ++h) {
        phase[h] += 2.0 * std::numbers::pi * h * f0 / sample_rate;
        if (phase[h] > 2.0 * std::numbers::pi) phase[h] -= 2.0 * std::numbers::pi;
        if (amp[h] != 0.0) voiced += amp[h] * std::sin(phase[h]);
      }
      voiced *= env;
      voiced += 0.02 * env * gauss(rng);
    } else {
      std::fill(amp.begin(), amp.end(), 0.0);
    }
    clip.samples[i] = static_cast<float>(voiced + 0.002 * gauss(rng));
  }

  float peak = 0.0f;
  for (float v : clip.samples) peak = std::max(peak, std::fabs(v));
  if (peak > 0.0f) {
    const float scale = 0.5f / peak;
    for (auto &v : clip.samples) v *= scale;
  }
  return clip;
}

}  // namespace rateinv
