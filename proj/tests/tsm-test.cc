// tests/tsm-test.cc

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
#include <numeric>
#include <random>
#include <set>

#include "rateinv/base/error.h"
#include "rateinv/corpus/manifest.h"
#include "rateinv/corpus/synth.h"
#include "rateinv/tsm/augment.h"
#include "rateinv/tsm/wsola.h"
#include "test-util.h"

using namespace rateinv;

namespace {

double Rms(const std::vector<float> &x) {
  double s = 0;
  for (float v : x) s += static_cast<double>(v) * v;
  return std::sqrt(s / x.size());
}

}  // namespace

TEST_CASE("wsola preserves pitch and follows the duration law") {
  const auto grid = AlphaGrid();
  for (double hz : {80.0, 110.0, 220.0, 330.0, 400.0})
    for (double alpha : grid) {
      auto in = testing::Tone(hz, 2.0);
      auto out = TimeStretch(in, alpha);
      const double want = in.size() / alpha;
      CHECK(std::abs(out.size() - want) / want < 0.02);
      const double peak = testing::DominantFrequency(out.samples, 16000);
      CHECK_MESSAGE(std::abs(peak - hz) / hz < 0.01, "hz=" << hz << " alpha=" << alpha);
      const double ratio = Rms(out.samples) / Rms(in.samples);
      CHECK(ratio > 0.5);
      CHECK(ratio < 2.0);
      CHECK(out.source_alpha == doctest::Approx(alpha));
    }
}

TEST_CASE("wsola composition and identity") {
  auto prof = MakeSpeakerProfile(3);
  auto x = SynthUtterance(prof, 2.0, 4.0, 5);
  auto y = TimeStretch(TimeStretch(x, 2.0), 0.5);
  CHECK(std::abs(static_cast<double>(y.size()) - x.size()) / x.size() < 0.04);
  CHECK(TimeStretch(x, 1.0).samples == x.samples);
}

TEST_CASE("wsola errors") {
  auto x = testing::Tone(200.0, 1.0);
  CHECK_THROWS_AS(TimeStretch(x, 0.4), Error);
  try {
    TimeStretch(x, 2.1);
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kRange);
  }
  AudioClip shortclip = testing::Tone(200.0, 0.03);
  try {
    TimeStretch(shortclip, 1.5);
    FAIL("expected kTooShort");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kTooShort);
  }
  TsmOptions bad;
  bad.synthesis_hop = 2000;
  CHECK_THROWS_AS(ValidateTsmOptions(bad), Error);
  bad = {};
  bad.search_tolerance = -1;
  CHECK_THROWS_AS(ValidateTsmOptions(bad), Error);
}

TEST_CASE("naive resampling moves the pitch") {
  for (double alpha : {0.5, 0.8, 1.2, 2.0}) {
    auto out = NaiveResample(testing::Tone(220.0, 2.0), alpha);
    const double peak = testing::DominantFrequency(out.samples, 16000, 50.0, 1000.0);
    CHECK(std::abs(peak - 220.0 * alpha) / (220.0 * alpha) < 0.01);
  }
}

TEST_CASE("wsola alignment finds a planted offset") {
  std::mt19937_64 rng(9);
  std::normal_distribution<float> g;
  const int tol = 32, n = 128;
  std::vector<float> region(n + 2 * tol);
  for (auto &v : region) v = g(rng);
  for (int k : {-32, -7, 0, 5, 32}) {
    std::vector<float> ref(region.begin() + tol + k, region.begin() + tol + k + n);
    CHECK(WsolaAlign(ref, region, tol) == k);
  }
  std::vector<float> zeros(n, 0.0f);
  CHECK(WsolaAlign(zeros, region, tol) == 0);
}

TEST_CASE("tsm window overlap-adds to a positive envelope") {
  auto w = TsmWindow(1024);
  std::vector<double> env(256, 0.0);
  for (int i = 0; i < 1024; ++i) env[i % 256] += w[i];
  for (double e : env) CHECK(e > 0.0);
}

TEST_CASE("augmentation plans") {
  CHECK(PlannedTotal(PlanVoxcelebStyle(1000), 1000) == 3500);
  CHECK(PlannedTotal(PlanVoxcelebStyle(160), 160) == 560);
  auto grid = AlphaGrid();
  REQUIRE(grid.size() == 16);
  CHECK(grid.front() == 0.5);
  CHECK(grid.back() == 2.0);
  CHECK(SnapAlpha(0.7000001) == 0.7);
  auto plan = PlanUniform({0.8, 1.2}, 0.5);
  CHECK(PlannedTotal(plan, 10) == 20);
  AugmentationPlan bad{{{1.0, 0.5}}};
  CHECK_THROWS_AS(ValidatePlan(bad), Error);
  bad = {{{0.8, 0.0}}};
  CHECK_THROWS_AS(ValidatePlan(bad), Error);
  bad = {{{0.8, 0.5}, {0.8, 0.25}}};
  CHECK_THROWS_AS(ValidatePlan(bad), Error);
  bad = {{{0.85, 0.5}}};
  CHECK_THROWS_AS(ValidatePlan(bad), Error);
}

TEST_CASE("subset selection is uniform without replacement and seeded") {
  auto a = SelectSubset(100, 25, 4), b = SelectSubset(100, 25, 4), c = SelectSubset(100, 25, 5);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(std::set<std::size_t>(a.begin(), a.end()).size() == 25);
  CHECK(std::is_sorted(a.begin(), a.end()));
  std::vector<int> hits(20, 0);
  for (uint64_t s = 0; s < 4000; ++s)
    for (auto i : SelectSubset(20, 5, s)) ++hits[i];
  for (int h : hits) CHECK(std::abs(h - 1000) < 150);
}

TEST_CASE("augment corpus writes stretched copies") {
  auto dir = testing::ScratchDir("augment");
  std::vector<UtteranceRecord> originals;
  for (int i = 0; i < 4; ++i) {
    auto prof = MakeSpeakerProfile(i);
    UtteranceRecord r;
    r.utt_id = "s" + std::to_string(i) + "_u0";
    r.speaker_id = "s" + std::to_string(i);
    r.path = dir / "in" / (r.utt_id + ".wav");
    std::filesystem::create_directories(r.path.parent_path());
    SaveWav(r.path, SynthUtterance(prof, 1.0, 4.0, i));
    originals.push_back(r);
  }
  auto plan = PlanUniform({0.5, 2.0}, 0.5);
  auto res = AugmentCorpus(originals, plan, {}, 1, dir / "out");
  CHECK(res.errors.empty());
  REQUIRE(res.added.size() == 4);
  for (const auto &r : res.added) {
    CHECK(std::filesystem::exists(r.path));
    CHECK(r.rate_label == RateLabelFromAlpha(r.alpha));
    CHECK(r.utt_id == DerivedUttId(SourceUttId(r.utt_id), r.alpha));
    auto info = ProbeWav(r.path);
    CHECK(std::abs(info.num_samples - 16000.0 / r.alpha) < 0.02 * 16000.0 / r.alpha);
  }
  auto bad = originals;
  bad[0].alpha = 0.5;
  bad[0].rate_label = RateLabel::kSlow;
  CHECK_THROWS_AS(AugmentCorpus(bad, plan, {}, 1, dir / "out"), Error);
}
