// include/rateinv/backend/eer.h

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

#ifndef RATEINV_BACKEND_EER_H_
#define RATEINV_BACKEND_EER_H_

#include <vector>

namespace rateinv {

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

// Equal error rate on the interpolated ROC. For each distinct score u
// (accept when score >= u) the operating point is
//   Pmiss(u) = #{targets < u} / #targets,  Pfa(u) = #{nontargets >= u} / #nontargets,
// followed by the reject-all point (1, 0). The EER is where the polyline
// through these points crosses Pmiss = Pfa. Throws Error(kEmptyTrials)
// unless both score sets are non-empty, kNumerical on a non-finite score.
EerResult ComputeEer(const std::vector<double> &target_scores,
                     const std::vector<double> &nontarget_scores);

}  // namespace rateinv

#endif  // RATEINV_BACKEND_EER_H_
