// src/tsm/wsola.cc

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

#include "rateinv/tsm/wsola.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rateinv/base/error.h"
#include "rateinv/kernels/kernels.h"

namespace rateinv {

std::vector<float> TsmWindow(int frame_length) {
  std::vector<float> w(frame_length);
  for (int i = 0; i < frame_length; ++i)
    w[i] = static_cast<float>(0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / frame_length));
  return w;
}

void ValidateTsmOptions(const TsmOptions &opts) {
  if (opts.frame_length <= 1) Fail(ErrorKind::kArgument, "TSM frame_length must exceed 1");
  if (opts.synthesis_hop <= 0 || opts.synthesis_hop > opts.frame_length)
    Fail(ErrorKind::kArgument, "TSM synthesis_hop must be in (0, frame_length]");
  if (opts.search_tolerance < 0)
    Fail(ErrorKind::kArgument, "TSM search_tolerance must be non-negative");
  const auto win = TsmWindow(opts.frame_length);
  std::vector<double> envelope(opts.synthesis_hop, 0.0);
  for (int i = 0; i < opts.frame_length; ++i) envelope[i % opts.synthesis_hop] += win[i];
  for (double e : envelope)
    if (!(e > 1e-6))
      Fail(ErrorKind::kArgument,
           "TSM window does not overlap-add to a positive envelope at hop " +
               std::to_string(opts.synthesis_hop));
}

int WsolaAlign(std::span<const float> reference, std::span<const float> region,
               int tolerance) {
  const std::size_t n = reference.size();
  if (tolerance < 0) Fail(ErrorKind::kArgument, "negative WSOLA tolerance");
  if (region.size() < n + 2 * static_cast<std::size_t>(tolerance))
    Fail(ErrorKind::kArgument, "WSOLA candidate region too short");
  if (tolerance == 0 || n == 0) return 0;

  const double ref_energy = kernels::Dot(reference, reference);
  if (!(ref_energy > 0.0)) return 0;

  // Sliding energy of the candidate window at each offset.
  const std::size_t span = n + 2 * static_cast<std::size_t>(tolerance);
  std::vector<double> prefix(span + 1, 0.0);
  for (std::size_t i = 0; i < span; ++i)
    prefix[i + 1] = prefix[i] + static_cast<double>(region[i]) * region[i];

  auto score = [&](int k) {
    const std::size_t start = static_cast<std::size_t>(tolerance + k);
    const double cand_energy = prefix[start + n] - prefix[start];
    if (!(cand_energy > 1e-20)) return 0.0;
    const double c = kernels::Dot(reference, region.subspan(start, n));
    return c / std::sqrt(ref_energy * cand_energy);
  };

  int best = 0;
  double best_score = score(0);
  for (int d = 1; d <= tolerance; ++d) {
    for (int k : {-d, d}) {
      const double s = score(k);
      if (s > best_score) {
        best_score = s;
        best = k;
      }
    }
  }
  return best;
}

AudioClip TimeStretch(const AudioClip &clip, double alpha, const TsmOptions &opts) {
  if (!(alpha >= kMinAlpha - 1e-12 && alpha <= kMaxAlpha + 1e-12))
    Fail(ErrorKind::kRange, "time-scale factor " + std::to_string(alpha) +
                                " outside [0.5, 2.0]");
  ValidateTsmOptions(opts);
  if (clip.samples.size() < static_cast<std::size_t>(opts.frame_length))
    Fail(ErrorKind::kTooShort, "clip shorter than one TSM frame");
  if (std::fabs(alpha - 1.0) <= 1e-12) return clip;

  const int n = opts.frame_length, hs = opts.synthesis_hop, tol = opts.search_tolerance;
  const double ha = hs * alpha;
  const std::size_t in_len = clip.samples.size();
  const std::size_t out_len = static_cast<std::size_t>(std::llround(in_len / alpha));
  const std::size_t num_frames =
      static_cast<std::size_t>(std::ceil((out_len + n / 2.0) / hs)) + 1;

  // Analysis frames are centred on round(m * ha); the front pad lets frame 0
  // start half a frame (plus the search tolerance) before the signal.
  const std::size_t front = static_cast<std::size_t>(n / 2 + tol);
  const std::size_t last_nominal =
      static_cast<std::size_t>(std::llround((num_frames - 1) * ha));
  const std::size_t padded_len =
      std::max(front + in_len, last_nominal + 2 * tol + n) + n + hs + 1;
  std::vector<float> xp(padded_len, 0.0f);
  std::copy(clip.samples.begin(), clip.samples.end(), xp.begin() + front);

  const auto win = TsmWindow(n);
  std::vector<double> out(num_frames * hs + n, 0.0), envelope(out.size(), 0.0);
  const std::span<const float> xs(xp);
  std::size_t prev_start = 0;
  for (std::size_t m = 0; m < num_frames; ++m) {
    const std::size_t nominal = static_cast<std::size_t>(std::llround(m * ha));
    int delta = 0;
    if (m > 0) {
      const std::size_t natural = prev_start + hs;
      delta = WsolaAlign(xs.subspan(natural, n), xs.subspan(nominal, n + 2 * tol), tol);
    }
    const std::size_t start = nominal + tol + delta;
    const std::size_t pos = m * hs;
    for (int i = 0; i < n; ++i) {
      out[pos + i] += static_cast<double>(win[i]) * xp[start + i];
      envelope[pos + i] += win[i];
    }
    prev_start = start;
  }

  AudioClip result;
  result.sample_rate = clip.sample_rate;
  result.source_alpha = alpha;
  result.samples.resize(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    const double e = envelope[i + n / 2];
    result.samples[i] = e > 1e-6 ? static_cast<float>(out[i + n / 2] / e) : 0.0f;
  }
  return result;
}

AudioClip NaiveResample(const AudioClip &clip, double alpha) {
  if (!(alpha > 0.0)) Fail(ErrorKind::kRange, "resample factor must be positive");
  if (clip.samples.empty()) Fail(ErrorKind::kTooShort, "empty clip");
  const std::size_t in_len = clip.samples.size();
  const std::size_t out_len = static_cast<std::size_t>(std::llround(in_len / alpha));
  AudioClip result;
  result.sample_rate = clip.sample_rate;
  result.source_alpha = alpha;
  result.samples.resize(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    const double src = i * alpha;
    const std::size_t j = static_cast<std::size_t>(src);
    const double frac = src - j;
    const float a = clip.samples[std::min(j, in_len - 1)];
    const float b = clip.samples[std::min(j + 1, in_len - 1)];
    result.samples[i] = static_cast<float>(a + frac * (b - a));
  }
  return result;
}

}  // namespace rateinv
