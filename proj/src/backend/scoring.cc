// src/backend/scoring.cc

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

#include "rateinv/backend/scoring.h"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "rateinv/base/error.h"
#include "rateinv/base/log.h"

namespace rateinv {

const char *ScoringBackendName(ScoringBackend b) {
  return b == ScoringBackend::kPlda ? "plda" : "cosine";
}

ScoringBackend ParseScoringBackend(const std::string &name) {
  if (name == "plda") return ScoringBackend::kPlda;
  if (name == "cosine") return ScoringBackend::kCosine;
  Fail(ErrorKind::kConfig, "unknown scoring backend '" + name + "' (plda|cosine)");
}

namespace {

Eigen::VectorXd ToEigen(const std::vector<double> &v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

TrialScorer::TrialScorer(const ScoringOptions &opts, const EmbeddingSet &train,
                         const std::vector<UtteranceRecord> &train_manifest)
    : opts_(opts) {
  if (opts_.backend == ScoringBackend::kCosine) return;
  std::map<std::string, std::vector<Eigen::VectorXd>> by_speaker;
  std::vector<Eigen::VectorXd> all;
  for (const auto &r : train_manifest) {
    auto it = train.vectors.find(r.utt_id);
    if (it == train.vectors.end()) continue;
    all.push_back(ToEigen(it->second));
    by_speaker[r.speaker_id].push_back(all.back());
  }
  if (all.empty()) Fail(ErrorKind::kEmptyTrials, "no training embeddings for PLDA");
  pre_ = EmbeddingPreprocessor::Fit(all, opts_.length_norm);
  std::vector<Eigen::MatrixXd> classes;
  for (const auto &[spk, vecs] : by_speaker) {
    Eigen::MatrixXd m(vecs[0].size(), static_cast<Eigen::Index>(vecs.size()));
    for (std::size_t i = 0; i < vecs.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = pre_->Apply(vecs[i]);
    classes.push_back(std::move(m));
  }
  plda_.emplace(TrainPlda(classes, opts_.plda));
}

double TrialScorer::Score(const std::vector<double> &enroll,
                          const std::vector<double> &test) const {
  if (opts_.backend == ScoringBackend::kCosine) return CosineScore(enroll, test);
  if (enroll.size() != plda_->Dim() || test.size() != plda_->Dim())
    Fail(ErrorKind::kDimension, "trial embedding dimension does not match the PLDA model");
  return plda_->Score(pre_->Apply(ToEigen(enroll)), pre_->Apply(ToEigen(test)));
}

std::vector<ScoredTrial> ScoreTrials(const TrialScorer &scorer, const EmbeddingSet &embeddings,
                                     const TrialList &trials, std::size_t *missing) {
  std::vector<ScoredTrial> out;
  out.reserve(trials.size());
  std::size_t miss = 0;
  for (const auto &t : trials) {
    auto e = embeddings.vectors.find(t.enroll_utt);
    auto s = embeddings.vectors.find(t.test_utt);
    if (e == embeddings.vectors.end() || s == embeddings.vectors.end()) {
      ++miss;
      continue;
    }
    out.push_back({t, scorer.Score(e->second, s->second)});
  }
  if (miss > 0) RATEINV_WARN("{} trials skipped: missing embeddings", miss);
  if (missing != nullptr) *missing = miss;
  return out;
}

EerResult EerFromScores(const std::vector<ScoredTrial> &scores) {
  std::vector<double> tgt, non;
  for (const auto &s : scores) (s.trial.is_target ? tgt : non).push_back(s.score);
  return ComputeEer(tgt, non);
}

void WriteScores(const std::filesystem::path &file, const std::vector<ScoredTrial> &scores) {
  std::ofstream os(file);
  if (!os) Fail(ErrorKind::kIo, "cannot write " + file.string());
  char buf[32];
  for (const auto &s : scores) {
    auto res = std::to_chars(buf, buf + sizeof(buf), s.score);
    os << s.trial.enroll_utt << ' ' << s.trial.test_utt << ' '
       << std::string_view(buf, res.ptr - buf) << '\n';
  }
  if (!os) Fail(ErrorKind::kIo, "error writing " + file.string());
}

std::vector<ScoredTrial> ReadScores(const std::filesystem::path &file, const TrialList &trials) {
  std::map<std::pair<std::string, std::string>, bool> labels;
  for (const auto &t : trials) labels[{t.enroll_utt, t.test_utt}] = t.is_target;
  std::ifstream is(file);
  if (!is) Fail(ErrorKind::kIo, "cannot open " + file.string());
  std::vector<ScoredTrial> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    ScoredTrial s;
    std::string score, extra;
    if (!(ss >> s.trial.enroll_utt >> s.trial.test_utt >> score) || (ss >> extra))
      Fail(ErrorKind::kFormat, file.string() + ":" + std::to_string(lineno) +
                                   ": expected 'enroll test score'");
    auto res = std::from_chars(score.data(), score.data() + score.size(), s.score);
    if (res.ec != std::errc() || res.ptr != score.data() + score.size())
      Fail(ErrorKind::kFormat, file.string() + ":" + std::to_string(lineno) + ": bad score");
    auto it = labels.find({s.trial.enroll_utt, s.trial.test_utt});
    if (it == labels.end())
      Fail(ErrorKind::kFormat, file.string() + ":" + std::to_string(lineno) +
                                   ": pair not in the trial list");
    s.trial.is_target = it->second;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace rateinv
