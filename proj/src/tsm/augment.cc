// src/tsm/augment.cc

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

#include "rateinv/tsm/augment.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "rateinv/base/error.h"
#include "rateinv/base/hash.h"
#include "rateinv/base/log.h"
#include "rateinv/corpus/audio.h"

namespace rateinv {

double SnapAlpha(double alpha) { return std::round(alpha * 10.0) / 10.0; }

std::vector<double> AlphaGrid() {
  std::vector<double> grid;
  for (int i = 5; i <= 20; ++i) grid.push_back(i / 10.0);
  return grid;
}

void ValidatePlan(const AugmentationPlan &plan) {
  std::set<long> seen;
  for (const auto &e : plan.entries) {
    const long key = std::lround(e.alpha * 10.0);
    if (std::fabs(e.alpha * 10.0 - key) > 1e-6)
      Fail(ErrorKind::kArgument, "plan alpha not on the 0.1 grid");
    if (key < 5 || key > 20) Fail(ErrorKind::kArgument, "plan alpha outside [0.5, 2.0]");
    if (key == 10) Fail(ErrorKind::kArgument, "plan must not contain alpha = 1.0");
    if (!seen.insert(key).second) Fail(ErrorKind::kArgument, "duplicate alpha in plan");
    if (!(e.fraction > 0.0 && e.fraction <= 1.0))
      Fail(ErrorKind::kArgument, "plan fraction must be in (0, 1]");
  }
}

AugmentationPlan PlanVoxcelebStyle(std::size_t n_originals) {
  if (n_originals < 1) Fail(ErrorKind::kArgument, "need at least one original utterance");
  AugmentationPlan plan;
  for (int i = 5; i <= 20; ++i) {
    if (i == 10) continue;
    plan.entries.push_back({i / 10.0, i < 10 ? 0.25 : 0.125});
  }
  return plan;
}

AugmentationPlan PlanUniform(const std::vector<double> &alphas, double fraction) {
  AugmentationPlan plan;
  for (double a : alphas) plan.entries.push_back({SnapAlpha(a), fraction});
  ValidatePlan(plan);
  return plan;
}

std::size_t ScaleCount(const AugmentationEntry &entry, std::size_t n_originals) {
  return static_cast<std::size_t>(std::llround(entry.fraction * n_originals));
}

std::size_t PlannedTotal(const AugmentationPlan &plan, std::size_t n_originals) {
  std::size_t total = n_originals;
  for (const auto &e : plan.entries) total += ScaleCount(e, n_originals);
  return total;
}

std::vector<std::size_t> SelectSubset(std::size_t n, std::size_t count, uint64_t seed) {
  count = std::min(count, n);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

AugmentResult AugmentCorpus(const std::vector<UtteranceRecord> &originals,
                            const AugmentationPlan &plan, const TsmOptions &opts,
                            uint64_t seed, const std::filesystem::path &out_root) {
  ValidatePlan(plan);
  ValidateTsmOptions(opts);
  for (const auto &r : originals)
    if (r.rate_label != RateLabel::kNormal)
      Fail(ErrorKind::kArgument, "augmentation source '" + r.utt_id + "' is not an original (alpha != 1)");

  AugmentResult result;
  for (const auto &entry : plan.entries) {
    const uint64_t scale_seed = Fnv1a64(DerivedUttId("plan", entry.alpha), seed);
    const auto chosen = SelectSubset(originals.size(), ScaleCount(entry, originals.size()), scale_seed);
    for (std::size_t i : chosen) {
      const UtteranceRecord &src = originals[i];
      UtteranceRecord rec;
      rec.utt_id = DerivedUttId(src.utt_id, entry.alpha);
      rec.speaker_id = src.speaker_id;
      rec.path = out_root.empty() ? src.path.parent_path() / (rec.utt_id + ".wav")
                                  : out_root / src.speaker_id / (rec.utt_id + ".wav");
      rec.alpha = entry.alpha;
      rec.rate_label = RateLabelFromAlpha(entry.alpha);
      try {
        const AudioClip stretched = TimeStretch(LoadWav(src.path), entry.alpha, opts);
        if (!out_root.empty()) std::filesystem::create_directories(rec.path.parent_path());
        SaveWav(rec.path, stretched);
        result.added.push_back(std::move(rec));
      } catch (const Error &e) {
        RATEINV_WARN("augment {}: {}", rec.utt_id, e.what());
        result.errors.push_back({src.path, e.what()});
      }
    }
  }
  return result;
}

}  // namespace rateinv
