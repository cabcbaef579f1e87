// src/corpus/trials.cc

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

#include "rateinv/corpus/trials.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rateinv/base/error.h"

namespace rateinv {

namespace fs = std::filesystem;

bool RateSelector::Matches(const UtteranceRecord &r) const {
  if (label && r.rate_label != *label) return false;
  if (alpha && std::fabs(r.alpha - *alpha) > 1e-6) return false;
  return true;
}

std::string RateSelector::ToString() const {
  if (alpha) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "alpha=%.2f", *alpha);
    return buf;
  }
  if (label) return RateLabelName(*label);
  return "any";
}

TrialList MakeTrials(const std::vector<UtteranceRecord> &manifest,
                     const RateSelector &enroll, const RateSelector &test) {
  if (manifest.empty()) Fail(ErrorKind::kEmptyTrials, "trial manifest is empty");
  std::set<std::string> speakers;
  for (const auto &r : manifest) speakers.insert(r.speaker_id);
  if (speakers.size() < 2)
    Fail(ErrorKind::kEmptyTrials,
         "test set has a single speaker; no impostor trials possible");

  std::vector<const UtteranceRecord *> enroll_set, test_set;
  for (const auto &r : manifest) {
    if (enroll.Matches(r)) enroll_set.push_back(&r);
    if (test.Matches(r)) test_set.push_back(&r);
  }
  if (enroll_set.empty())
    Fail(ErrorKind::kEmptyTrials, "no enrollment utterances match " + enroll.ToString());
  if (test_set.empty())
    Fail(ErrorKind::kEmptyTrials, "no test utterances match " + test.ToString());

  TrialList trials;
  trials.reserve(enroll_set.size() * test_set.size());
  std::size_t targets = 0;
  for (const auto *e : enroll_set) {
    const std::string e_src = SourceUttId(e->utt_id);
    for (const auto *t : test_set) {
      if (SourceUttId(t->utt_id) == e_src) continue;
      const bool target = e->speaker_id == t->speaker_id;
      targets += target;
      trials.push_back({e->utt_id, t->utt_id, target});
    }
  }
  if (targets == 0)
    Fail(ErrorKind::kEmptyTrials, "no target trials for " + enroll.ToString() +
                                      " x " + test.ToString());
  if (targets == trials.size())
    Fail(ErrorKind::kEmptyTrials, "no impostor trials for " + enroll.ToString() +
                                      " x " + test.ToString());
  return trials;
}

void WriteTrials(const fs::path &file, const TrialList &trials) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + file.string());
  for (const auto &t : trials)
    out << t.enroll_utt << ' ' << t.test_utt << ' '
        << (t.is_target ? "target" : "nontarget") << '\n';
}

TrialList ReadTrials(const fs::path &file) {
  std::ifstream in(file);
  if (!in) Fail(ErrorKind::kIo, "cannot open trial file " + file.string());
  TrialList trials;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    Trial t;
    std::string label, extra;
    if (!(ss >> t.enroll_utt >> t.test_utt >> label) || (ss >> extra) ||
        (label != "target" && label != "nontarget"))
      Fail(ErrorKind::kFormat,
           file.string() + ":" + std::to_string(line_no) + ": bad trial line");
    t.is_target = label == "target";
    trials.push_back(std::move(t));
  }
  return trials;
}

}  // namespace rateinv
