// src/backend/eer.cc

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

#include "rateinv/backend/eer.h"

#include <algorithm>
#include <cmath>

#include "rateinv/base/error.h"

namespace rateinv {

EerResult ComputeEer(const std::vector<double> &target_scores,
                     const std::vector<double> &nontarget_scores) {
  if (target_scores.empty() || nontarget_scores.empty())
    Fail(ErrorKind::kEmptyTrials, "EER needs at least one target and one nontarget score");
  // (score, is_target) sorted ascending.
  std::vector<std::pair<double, bool>> all;
  all.reserve(target_scores.size() + nontarget_scores.size());
  for (double s : target_scores) all.emplace_back(s, true);
  for (double s : nontarget_scores) all.emplace_back(s, false);
  for (const auto &p : all)
    if (!std::isfinite(p.first)) Fail(ErrorKind::kNumerical, "non-finite score");
  std::sort(all.begin(), all.end());

  const double nt = static_cast<double>(target_scores.size());
  const double nn = static_cast<double>(nontarget_scores.size());
  std::size_t tgt_below = 0, non_below = 0;
  // Previous operating point.
  double prev_miss = 0.0, prev_fa = 0.0, prev_u = 0.0;
  bool have_prev = false;
  std::size_t i = 0;
  auto crossing = [&](double miss, double fa, double u, bool at_infinity) -> std::pair<bool, EerResult> {
    const double d = fa - miss;
    if (d == 0.0) return {true, {miss, u}};
    if (have_prev && d < 0.0) {
      const double d0 = prev_fa - prev_miss;  // > 0 here
      const double t = d0 / (d0 - d);
      EerResult r;
      r.eer = prev_miss + t * (miss - prev_miss);
      r.threshold = at_infinity ? prev_u : prev_u + t * (u - prev_u);
      return {true, r};
    }
    prev_miss = miss;
    prev_fa = fa;
    prev_u = u;
    have_prev = true;
    return {false, {}};
  };
  while (i < all.size()) {
    const double u = all[i].first;
    const double miss = tgt_below / nt;
    const double fa = (nn - non_below) / nn;
    auto [done, r] = crossing(miss, fa, u, false);
    if (done) return r;
    while (i < all.size() && all[i].first == u) {
      (all[i].second ? tgt_below : non_below) += 1;
      ++i;
    }
  }
  return crossing(1.0, 0.0, prev_u, true).second;
}

}  // namespace rateinv
