// tests/feat-test.cc

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
#include <numbers>
#include <random>

#include "rateinv/base/error.h"
#include "rateinv/corpus/synth.h"
#include "rateinv/feat/archive.h"
#include "rateinv/feat/front-end.h"
#include "rateinv/feat/mfcc.h"
#include "rateinv/feat/vad-cmn.h"
#include "test-util.h"

using namespace rateinv;

namespace {

// Direct evaluation of one MFCC frame: DFT by summation, triangular mel
// filters built from the mel scale, orthonormal DCT-II.
std::vector<double> OracleMfccFrame(const std::vector<float> &samples, std::size_t start,
                                    const MfccOptions &o) {
  const int n = o.frame_length;
  std::vector<double> x(samples.begin() + start, samples.begin() + start + n);
  double mean = 0;
  for (double v : x) mean += v;
  mean /= n;
  for (double &v : x) v -= mean;
  for (int i = n - 1; i > 0; --i) x[i] -= o.preemph * x[i - 1];
  x[0] -= o.preemph * x[0];
  for (int i = 0; i < n; ++i) x[i] *= 0.54 - 0.46 * std::cos(2 * std::numbers::pi * i / n);
  const int bins = o.fft_size / 2 + 1;
  std::vector<double> power(bins);
  for (int k = 0; k < bins; ++k) {
    double re = 0, im = 0;
    for (int i = 0; i < n; ++i) {
      re += x[i] * std::cos(2 * std::numbers::pi * k * i / o.fft_size);
      im -= x[i] * std::sin(2 * std::numbers::pi * k * i / o.fft_size);
    }
    power[k] = re * re + im * im;
  }
  const double ml = MelScale(o.low_freq), mh = MelScale(o.high_freq);
  const double dm = (mh - ml) / (o.num_mel_bins + 1);
  std::vector<double> logmel(o.num_mel_bins);
  for (int m = 0; m < o.num_mel_bins; ++m) {
    const double l = ml + m * dm, c = l + dm, r = c + dm;
    double e = 0;
    for (int k = 0; k < bins; ++k) {
      const double mk = MelScale(static_cast<double>(k) * o.sample_rate / o.fft_size);
      double w = 0;
      if (mk > l && mk <= c) w = (mk - l) / (c - l);
      else if (mk > c && mk < r) w = (r - mk) / (r - c);
      e += w * power[k];
    }
    logmel[m] = std::log(std::max(e, o.energy_floor));
  }
  std::vector<double> ceps(o.num_ceps);
  for (int q = 0; q < o.num_ceps; ++q) {
    double s = 0;
    for (int m = 0; m < o.num_mel_bins; ++m)
      s += logmel[m] * std::cos(std::numbers::pi * q * (m + 0.5) / o.num_mel_bins);
    ceps[q] = s * std::sqrt((q == 0 ? 1.0 : 2.0) / o.num_mel_bins);
  }
  return ceps;
}

FeatureMatrix RandomFeatures(std::size_t rows, std::size_t cols, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g(2.0f, 3.0f);
  FeatureMatrix m(rows, cols);
  for (auto &v : m.Data()) v = g(rng);
  return m;
}

}  // namespace

TEST_CASE("frame count formula") {
  MfccOptions o;
  MfccComputer mfcc(o);
  CHECK(NumFrames(399, o) == 0);
  for (std::size_t len : {400u, 401u, 559u, 560u, 561u, 16000u, 16037u}) {
    CHECK(NumFrames(len, o) == (len - 400) / 160 + 1);
    AudioClip c = testing::Tone(300.0, 1.0);
    c.samples.resize(len, 0.1f);
    CHECK(mfcc.Compute(c).features.NumRows() == NumFrames(len, o));
  }
}

TEST_CASE("mfcc matches a direct evaluation") {
  MfccOptions o;
  MfccComputer mfcc(o);
  auto clip = SynthUtterance(MakeSpeakerProfile(2), 1.0, 4.0, 3);
  auto out = mfcc.Compute(clip);
  REQUIRE(out.features.NumCols() == 40);
  for (std::size_t t : {0u, 17u, 50u, 97u}) {
    auto want = OracleMfccFrame(clip.samples, t * o.frame_shift, o);
    for (int q = 0; q < o.num_ceps; ++q)
      CHECK(out.features(t, q) == doctest::Approx(want[q]).epsilon(1e-4).scale(1.0));
  }
  auto again = mfcc.Compute(clip);
  CHECK(again.features == out.features);
  CHECK(again.log_energy == out.log_energy);
}

TEST_CASE("mfcc error kinds") {
  MfccComputer mfcc;
  auto c = testing::Tone(300.0, 0.02);
  CHECK_THROWS_AS(mfcc.Compute(c), Error);
  c = testing::Tone(300.0, 1.0, 8000);
  try {
    mfcc.Compute(c);
    FAIL("expected kArgument");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kArgument);
  }
}

TEST_CASE("energy vad keeps loud frames") {
  std::vector<float> le = {-20, -2, -1, -3, -20, -0.5f};
  auto mask = EnergyVad(le);
  const double mean = (-20 - 2 - 1 - 3 - 20 - 0.5) / 6.0;
  for (std::size_t i = 0; i < le.size(); ++i)
    CHECK(mask[i] == (le[i] > mean - 1.5 && le[i] > -13.8));
  std::vector<float> quiet(10, -30.0f);
  try {
    EnergyVad(quiet);
    FAIL("expected kEmptyAfterVad");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kEmptyAfterVad);
  }
  FeatureMatrix f = RandomFeatures(6, 3, 1);
  auto kept = ApplyMask(f, mask);
  std::size_t r = 0;
  for (std::size_t i = 0; i < 6; ++i)
    if (mask[i]) {
      for (std::size_t c = 0; c < 3; ++c) CHECK(kept(r, c) == f(i, c));
      ++r;
    }
  CHECK(kept.NumRows() == r);
}

TEST_CASE("sliding cmn matches a brute-force window mean") {
  for (std::size_t rows : {1u, 7u, 40u, 301u, 650u}) {
    auto f = RandomFeatures(rows, 5, rows);
    const int window = 300;
    auto out = SlidingCmn(f, window);
    for (std::size_t t = 0; t < rows; ++t) {
      long begin = static_cast<long>(t) - window / 2;
      long end = begin + window;
      if (end > static_cast<long>(rows)) {
        begin -= end - static_cast<long>(rows);
        end = rows;
      }
      if (begin < 0) {
        end = std::min<long>(end - begin, rows);
        begin = 0;
      }
      for (std::size_t c = 0; c < 5; ++c) {
        double s = 0;
        for (long u = begin; u < end; ++u) s += f(u, c);
        CHECK(out(t, c) == doctest::Approx(f(t, c) - s / (end - begin)).epsilon(1e-5).scale(1.0));
      }
    }
    if (rows <= 300)
      for (std::size_t c = 0; c < 5; ++c) {
        double s = 0;
        for (std::size_t t = 0; t < rows; ++t) s += out(t, c);
        CHECK(std::abs(s / rows) < 1e-6);
      }
  }
}

TEST_CASE("front end and archive round trip") {
  auto dir = testing::ScratchDir("archive");
  MfccComputer mfcc;
  FrontEndOptions fe;
  auto clip = SynthUtterance(MakeSpeakerProfile(4), 2.0, 4.0, 1);
  auto feats = ExtractFeatures(mfcc, clip, "u1", fe);
  CHECK(feats.NumRows() > 50);
  CHECK(feats.NumRows() <= NumFrames(clip.size(), fe.mfcc));
  for (float v : feats.Data()) REQUIRE(std::isfinite(v));
  auto other = RandomFeatures(13, 40, 2);
  {
    FeatureArchiveWriter w(dir / "f.ark", dir / "f.idx");
    w.Write("u1", feats);
    w.Write("u2", other);
    w.Close();
  }
  auto all = ReadFeatureArchive(dir / "f.ark", dir / "f.idx");
  REQUIRE(all.size() == 2);
  CHECK(all.at("u1").Data().size() == feats.Data().size());
  CHECK(std::equal(feats.Data().begin(), feats.Data().end(), all.at("u1").Data().begin()));
  CHECK(std::equal(other.Data().begin(), other.Data().end(), all.at("u2").Data().begin()));
  auto idx = ReadFeatureIndex(dir / "f.idx");
  CHECK_THROWS_AS(ReadFeatureRecord(dir / "f.ark", idx.at("u2") + 1), Error);
}
