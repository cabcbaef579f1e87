// tests/backend-test.cc

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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "oracles.h"
#include "rateinv/backend/eer.h"
#include "rateinv/backend/embeddings.h"
#include "rateinv/backend/plda.h"
#include "rateinv/backend/report.h"
#include "rateinv/backend/scoring.h"
#include "rateinv/base/error.h"
#include "rateinv/model/params.h"
#include "test-util.h"

using namespace rateinv;
using namespace rateinv::testing;

namespace {

std::pair<std::vector<double>, std::vector<double>> RandomScores(std::mt19937_64 &rng) {
  const int nt = 1 + static_cast<int>(rng() % 100), nn = 1 + static_cast<int>(rng() % 100);
  const bool ties = rng() % 3 == 0;
  std::normal_distribution<double> g;
  auto draw = [&](double shift) {
    const double v = g(rng) + shift;
    return ties ? std::round(v * 2.0) / 2.0 : v;
  };
  std::vector<double> t(nt), n(nn);
  for (double &x : t) x = draw(1.0);
  for (double &x : n) x = draw(0.0);
  return {t, n};
}

}  // namespace

TEST_CASE("eer matches the exhaustive sweep") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 300; ++i) {
    auto [t, n] = RandomScores(rng);
    CHECK(std::abs(ComputeEer(t, n).eer - BruteForceEer(t, n)) < 1e-9);
  }
}

TEST_CASE("eer reference values") {
  CHECK(ComputeEer({2, 3}, {0, 1}).eer == 0.0);
  CHECK(ComputeEer({0, 1}, {2, 3}).eer == 1.0);
  CHECK(ComputeEer({1, 1}, {1, 1}).eer == doctest::Approx(0.5));
  CHECK(ComputeEer({1, 3}, {2, 0}).eer == doctest::Approx(0.5));
}

TEST_CASE("eer is invariant to increasing transforms and flips under label swap") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    auto [t, n] = RandomScores(rng);
    const double e = ComputeEer(t, n).eer;
    auto tt = t, tn = n;
    for (double &x : tt) x = std::exp(0.7 * x) + 3.0;
    for (double &x : tn) x = std::exp(0.7 * x) + 3.0;
    CHECK(ComputeEer(tt, tn).eer == doctest::Approx(e).epsilon(1e-12));
    CHECK(ComputeEer(n, t).eer == doctest::Approx(1.0 - e).epsilon(1e-12));
  }
}

TEST_CASE("eer errors") {
  auto kind = [](std::vector<double> t, std::vector<double> n) {
    try {
      ComputeEer(t, n);
    } catch (const Error &e) {
      return e.kind();
    }
    return ErrorKind::kArgument;
  };
  CHECK(kind({}, {1.0}) == ErrorKind::kEmptyTrials);
  CHECK(kind({1.0}, {}) == ErrorKind::kEmptyTrials);
  CHECK(kind({NAN}, {1.0}) == ErrorKind::kNumerical);
}

TEST_CASE("plda log-likelihood matches the joint gaussian") {
  std::mt19937_64 rng(3);
  const Eigen::VectorXd mu = Eigen::VectorXd::Random(3);
  const auto b = RandomSpd({2.0, 1.0, 0.5}, rng), w = RandomSpd({1.0, 0.6, 0.3}, rng);
  auto classes = SampleTwoCovariance(mu, b, w, 6, 1, rng);
  auto more = SampleTwoCovariance(mu, b, w, 5, 4, rng);
  classes.insert(classes.end(), more.begin(), more.end());
  const PldaModel m{mu, b, w};
  const double want = DirectPldaLogLikelihood(mu, b, w, classes);
  CHECK(PldaLogLikelihood(m, classes) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("plda llr matches direct evaluation and is symmetric") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const int d = 1 + static_cast<int>(rng() % 4);
    std::vector<double> eb(d), ew(d);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int k = 0; k < d; ++k) eb[k] = u(rng), ew[k] = u(rng);
    PldaModel m{Eigen::VectorXd::Random(d), RandomSpd(eb, rng), RandomSpd(ew, rng)};
    PldaScorer s(m);
    const Eigen::VectorXd x1 = 2.0 * Eigen::VectorXd::Random(d), x2 = 2.0 * Eigen::VectorXd::Random(d);
    CHECK(std::abs(s.Score(x1, x2) - DirectPldaLlr(m.mu, m.between, m.within, x1, x2)) < 1e-8);
    CHECK(std::abs(s.Score(x1, x2) - s.Score(x2, x1)) < 1e-12);
  }
}

TEST_CASE("plda em increases the likelihood and recovers the covariances") {
  std::mt19937_64 rng(5);
  const int d = 4;
  const Eigen::VectorXd mu = Eigen::VectorXd::Constant(d, 0.5);
  const auto b = RandomSpd({3.0, 2.0, 1.0, 0.5}, rng), w = RandomSpd({1.0, 0.7, 0.4, 0.2}, rng);
  auto classes = SampleTwoCovariance(mu, b, w, 1500, 4, rng);
  std::vector<double> ll;
  auto m = TrainPlda(classes, {}, &ll);
  REQUIRE(ll.size() == 11);
  for (std::size_t i = 1; i < ll.size(); ++i) CHECK(ll[i] >= ll[i - 1] - 1e-9 * std::abs(ll[i - 1]));
  CHECK((m.between - b).norm() / b.norm() < 0.15);
  CHECK((m.within - w).norm() / w.norm() < 0.15);
  CHECK((m.mu - mu).norm() < 0.2);
  CHECK(PldaLogLikelihood(m, classes) == doctest::Approx(ll.back()).epsilon(1e-12));
}

TEST_CASE("plda handles singular within-class scatter") {
  std::mt19937_64 rng(6);
  const int d = 6;
  auto classes = SampleTwoCovariance(Eigen::VectorXd::Zero(d), RandomSpd({1, 1, 1, 1, 1, 1}, rng),
                                     RandomSpd({1, 1, 1, 1, 1, 1}, rng), 3, 2, rng);
  auto m = TrainPlda(classes);
  CHECK(m.within.allFinite());
  CHECK(m.between.allFinite());
  PldaScorer s(m);
  CHECK(std::isfinite(s.Score(classes[0].col(0), classes[1].col(0))));
  std::vector<Eigen::MatrixXd> one{classes[0]};
  CHECK_THROWS_AS(TrainPlda(one), Error);
}

TEST_CASE("preprocessing and cosine scoring") {
  std::vector<Eigen::VectorXd> train{Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(3, 2, 1)};
  auto pre = EmbeddingPreprocessor::Fit(train, true);
  CHECK(pre.mean.isApprox(Eigen::Vector3d(2, 2, 2)));
  CHECK(pre.Apply(Eigen::Vector3d(5, 2, 2)).norm() == doctest::Approx(std::sqrt(3.0)));
  auto raw = EmbeddingPreprocessor::Fit(train, false);
  CHECK(raw.Apply(Eigen::Vector3d(5, 2, 2)).isApprox(Eigen::Vector3d(3, 0, 0)));
  CHECK(CosineScore({1, 0}, {2, 0}) == doctest::Approx(1.0));
  CHECK(CosineScore({1, 0}, {0, 3}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(CosineScore({1, 0}, {1, 0, 0}), Error);
}

TEST_CASE("trial scoring end to end on separable embeddings") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  EmbeddingSet train, test;
  std::vector<UtteranceRecord> manifest;
  std::vector<std::vector<double>> centers(8, std::vector<double>(6));
  for (auto &c : centers)
    for (double &x : c) x = 3.0 * g(rng);
  for (int s = 0; s < 8; ++s)
    for (int u = 0; u < 6; ++u) {
      std::vector<double> v = centers[s];
      for (double &x : v) x += 0.3 * g(rng);
      const std::string id = "s" + std::to_string(s) + "_u" + std::to_string(u);
      (s < 5 ? train : test).vectors[id] = v;
      if (s < 5) manifest.push_back({id, "s" + std::to_string(s), "x.wav", 1.0, RateLabel::kNormal});
    }
  TrialList trials;
  for (const auto &[a, va] : test.vectors)
    for (const auto &[b, vb] : test.vectors)
      if (a < b) trials.push_back({a, b, a.substr(0, 2) == b.substr(0, 2)});
  trials.push_back({"missing", "s5_u0", false});
  for (auto backend : {ScoringBackend::kPlda, ScoringBackend::kCosine}) {
    ScoringOptions o;
    o.backend = backend;
    TrialScorer scorer(o, train, manifest);
    std::size_t missing = 0;
    auto scored = ScoreTrials(scorer, test, trials, &missing);
    CHECK(missing == 1);
    CHECK(scored.size() == trials.size() - 1);
    CHECK(EerFromScores(scored).eer < 0.05);
    auto dir = ScratchDir("scores");
    WriteScores(dir / "a.scores", scored);
    auto back = ReadScores(dir / "a.scores", trials);
    REQUIRE(back.size() == scored.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i].score == scored[i].score);
      CHECK(back[i].trial.is_target == scored[i].trial.is_target);
    }
    TrialList partial(trials.begin(), trials.begin() + 3);
    CHECK_THROWS_AS(ReadScores(dir / "a.scores", partial), Error);
  }
  CHECK(ParseScoringBackend("cosine") == ScoringBackend::kCosine);
  CHECK_THROWS_AS(ParseScoringBackend("svm"), Error);
}

TEST_CASE("embedding extraction and io") {
  ModelConfig cfg;
  cfg.input_dim = 5;
  cfg.embed_dim = 8;
  cfg.cos_dim = 4;
  ModelParams p = InitParams(cfg, 1);
  std::map<std::string, FeatureMatrix> feats;
  feats["a"] = FeatureMatrix(40, 5, 0.3f);
  feats["b"] = FeatureMatrix(3, 5, 0.3f);
  for (std::size_t i = 0; i < 40; ++i) feats["a"](i, i % 5) = 1.0f;
  std::vector<UtteranceRecord> m{{"a", "s", "a.wav", 1.0, RateLabel::kNormal},
                                 {"b", "s", "b.wav", 1.0, RateLabel::kNormal},
                                 {"c", "s", "c.wav", 1.0, RateLabel::kNormal}};
  ExtractReport rep;
  auto set = ExtractEmbeddings(p, m, feats, &rep, 2);
  CHECK(set.vectors.size() == 1);
  CHECK(rep.skipped.size() == 2);
  CHECK(set.Dim() == 8);
  auto dir = ScratchDir("emb");
  WriteEmbeddings(dir / "e.emb", set);
  CHECK(ReadEmbeddings(dir / "e.emb").vectors == set.vectors);
}

TEST_CASE("report tables") {
  auto t = RateSweepReport("T", {"sysA", "sysB"}, {AlphaColumnName(0.5), AlphaColumnName(1.0)},
                           [](std::size_t s, std::size_t c) -> EerResult {
                             if (s == 1 && c == 1) Fail(ErrorKind::kEmptyTrials, "no trials");
                             return {0.01 * (1 + s + c), 0.0};
                           });
  CHECK(t.columns == std::vector<std::string>{"0.5", "1.0"});
  CHECK(t.errors.size() == 1);
  CHECK(!t.eer[1][1].has_value());
  AddAverageColumn(&t);
  CHECK(t.columns.back() == "Average");
  CHECK(*t.eer[0][2] == doctest::Approx(0.015));
  CHECK(*t.eer[1][2] == doctest::Approx(0.02));
  const auto text = FormatReportTable(t);
  CHECK(text.find("1.50") != std::string::npos);
  CHECK(text.find("-") != std::string::npos);
  const auto svg = RenderReportSvg(t);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("sysB") != std::string::npos);
}
