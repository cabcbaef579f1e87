// src/feat/vad-cmn.cc

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

#include "rateinv/feat/vad-cmn.h"

#include <algorithm>

#include "rateinv/base/error.h"

namespace rateinv {

std::vector<bool> EnergyVad(std::span<const float> log_energy, const VadOptions &opts) {
  if (log_energy.empty()) Fail(ErrorKind::kTooShort, "VAD on zero frames");
  double mean = 0.0;
  for (float e : log_energy) mean += e;
  mean /= static_cast<double>(log_energy.size());
  const double threshold = mean + opts.relative_offset;
  std::vector<bool> mask(log_energy.size());
  std::size_t kept = 0;
  for (std::size_t i = 0; i < log_energy.size(); ++i) {
    mask[i] = log_energy[i] > threshold && log_energy[i] > opts.absolute_floor;
    kept += mask[i];
  }
  if (kept == 0) Fail(ErrorKind::kEmptyAfterVad, "no frames left after energy VAD");
  return mask;
}

FeatureMatrix ApplyMask(const FeatureMatrix &features, const std::vector<bool> &mask) {
  if (mask.size() != features.NumRows())
    Fail(ErrorKind::kDimension, "VAD mask length does not match frame count");
  const auto kept = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
  FeatureMatrix out(kept, features.NumCols());
  out.utt_id = features.utt_id;
  std::size_t r = 0;
  for (std::size_t t = 0; t < mask.size(); ++t) {
    if (!mask[t]) continue;
    std::copy_n(features.Row(t).begin(), features.NumCols(), out.Row(r).begin());
    ++r;
  }
  return out;
}

FeatureMatrix SlidingCmn(const FeatureMatrix &features, int window) {
  if (window <= 0) Fail(ErrorKind::kArgument, "CMN window must be positive");
  const std::size_t T = features.NumRows(), D = features.NumCols();
  FeatureMatrix out(T, D);
  out.utt_id = features.utt_id;
  if (T == 0) return out;
  // Column prefix sums in double.
  std::vector<double> prefix((T + 1) * D, 0.0);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t d = 0; d < D; ++d)
      prefix[(t + 1) * D + d] = prefix[t * D + d] + features(t, d);
  const auto W = static_cast<long>(window);
  const auto len = static_cast<long>(T);
  for (long t = 0; t < len; ++t) {
    long begin = t - W / 2, end = begin + W;
    if (begin < 0) {
      end -= begin;
      begin = 0;
    }
    if (end > len) {
      begin -= end - len;
      end = len;
    }
    begin = std::max(begin, 0L);
    const double count = static_cast<double>(end - begin);
    for (std::size_t d = 0; d < D; ++d) {
      const double mean = (prefix[end * D + d] - prefix[begin * D + d]) / count;
      out(t, d) = static_cast<float>(features(t, d) - mean);
    }
  }
  return out;
}

}  // namespace rateinv
