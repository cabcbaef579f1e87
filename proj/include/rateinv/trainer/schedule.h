// include/rateinv/trainer/schedule.h

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

#ifndef RATEINV_TRAINER_SCHEDULE_H_
#define RATEINV_TRAINER_SCHEDULE_H_

#include <string>

namespace rateinv {

enum class Phase { kMaximize, kMinimize };
const char *PhaseName(Phase p);  // "max" / "min"

// Alternating max/min schedule. The phase of a step is a pure function of
// the step index: steps [0, max) maximize, [max, max + min) minimize, and
// the pattern repeats. With adversarial = false every step minimizes.
class AdversarialSchedule {
 public:
  AdversarialSchedule(int max_phase_iters = 20, int min_phase_iters = 50,
                      bool adversarial = true);

  Phase PhaseAt(long step) const;
  // 0-based position of `step` inside its phase.
  long IterInPhase(long step) const;
  // True when `step` is the first step of a phase (step 0 included).
  bool IsPhaseStart(long step) const { return IterInPhase(step) == 0; }

  int max_phase_iters() const { return max_iters_; }
  int min_phase_iters() const { return min_iters_; }
  bool adversarial() const { return adversarial_; }

 private:
  int max_iters_, min_iters_;
  bool adversarial_;
};

}  // namespace rateinv

#endif  // RATEINV_TRAINER_SCHEDULE_H_
