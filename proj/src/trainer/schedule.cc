// src/trainer/schedule.cc

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

#include "rateinv/trainer/schedule.h"

#include "rateinv/base/error.h"

namespace rateinv {

const char *PhaseName(Phase p) { return p == Phase::kMaximize ? "max" : "min"; }

AdversarialSchedule::AdversarialSchedule(int max_phase_iters, int min_phase_iters,
                                         bool adversarial)
    : max_iters_(max_phase_iters), min_iters_(min_phase_iters), adversarial_(adversarial) {
  if (max_iters_ <= 0 || min_iters_ <= 0)
    Fail(ErrorKind::kConfig, "schedule phase lengths must be positive");
}

Phase AdversarialSchedule::PhaseAt(long step) const {
  if (step < 0) Fail(ErrorKind::kArgument, "negative step");
  if (!adversarial_) return Phase::kMinimize;
  return step % (max_iters_ + min_iters_) < max_iters_ ? Phase::kMaximize : Phase::kMinimize;
}

long AdversarialSchedule::IterInPhase(long step) const {
  if (step < 0) Fail(ErrorKind::kArgument, "negative step");
  if (!adversarial_) return step;
  const long pos = step % (max_iters_ + min_iters_);
  return pos < max_iters_ ? pos : pos - max_iters_;
}

}  // namespace rateinv
