// include/rateinv/tsm/augment.h

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

#ifndef RATEINV_TSM_AUGMENT_H_
#define RATEINV_TSM_AUGMENT_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "rateinv/corpus/manifest.h"
#include "rateinv/tsm/wsola.h"

namespace rateinv {

struct AugmentationEntry {
  double alpha = 1.0;     // on the 0.1 grid within [0.5, 2.0], never 1.0
  double fraction = 0.0;  // share of the originals stretched at this alpha
};

struct AugmentationPlan {
  std::vector<AugmentationEntry> entries;
};

// Rounds to the 0.1 grid.
double SnapAlpha(double alpha);

// Grid of time-scale factors 0.5, 0.6, ..., 2.0 (16 values, 1.0 included).
std::vector<double> AlphaGrid();

// Throws Error(kArgument) for duplicate or off-grid alphas, alpha == 1.0,
// or fractions outside (0, 1].
void ValidatePlan(const AugmentationPlan &plan);

// A quarter of the originals at each of 0.5..0.9 and an eighth at each of
// 1.1..2.0; total corpus about 3.5x the originals.
AugmentationPlan PlanVoxcelebStyle(std::size_t n_originals);

// Same fraction at every listed alpha (snapped to the grid).
AugmentationPlan PlanUniform(const std::vector<double> &alphas, double fraction);

// Number of originals stretched for an entry: round(fraction * n).
std::size_t ScaleCount(const AugmentationEntry &entry, std::size_t n_originals);
// Originals plus all stretched copies.
std::size_t PlannedTotal(const AugmentationPlan &plan, std::size_t n_originals);

// `count` distinct indices from [0, n), uniformly without replacement,
// returned in ascending order. Deterministic in seed.
std::vector<std::size_t> SelectSubset(std::size_t n, std::size_t count, uint64_t seed);

struct AugmentResult {
  std::vector<UtteranceRecord> added;       // new records only
  std::vector<ManifestIssue> errors;        // per-file failures
};

// Stretches the selected originals and writes "{utt}_a{alpha}.wav" next to
// each source file, or under out_root/{speaker}/ when out_root is given.
// Originals must have alpha == 1 (kArgument otherwise);
// per-file failures are collected, not thrown. Existing output files are
// rewritten.
AugmentResult AugmentCorpus(const std::vector<UtteranceRecord> &originals,
                            const AugmentationPlan &plan, const TsmOptions &opts,
                            uint64_t seed, const std::filesystem::path &out_root = {});

}  // namespace rateinv

#endif  // RATEINV_TSM_AUGMENT_H_
