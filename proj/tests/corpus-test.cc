// tests/corpus-test.cc

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
#include <set>

#include "rateinv/base/error.h"
#include "rateinv/corpus/audio.h"
#include "rateinv/corpus/manifest.h"
#include "rateinv/corpus/synth.h"
#include "rateinv/corpus/trials.h"
#include "test-util.h"

using namespace rateinv;
namespace fs = std::filesystem;

namespace {

template <typename F>
ErrorKind KindOf(F &&f) {
  try {
    f();
  } catch (const Error &e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::kArgument;
}

void WriteBytes(const fs::path &p, const std::string &bytes) {
  std::ofstream o(p, std::ios::binary);
  o << bytes;
}

std::string Le(uint32_t v, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  return s;
}

std::string WavHeader(int channels, int bits, int sr, uint32_t data_bytes) {
  std::string h = "RIFF" + Le(36 + data_bytes, 4) + "WAVEfmt " + Le(16, 4) + Le(1, 2) +
                  Le(channels, 2) + Le(sr, 4) + Le(sr * channels * bits / 8, 4) +
                  Le(channels * bits / 8, 2) + Le(bits, 2) + "data" + Le(data_bytes, 4);
  return h;
}

UtteranceRecord Rec(const std::string &utt, const std::string &spk, double alpha) {
  UtteranceRecord r;
  r.utt_id = utt;
  r.speaker_id = spk;
  r.path = "/nonexistent/" + utt + ".wav";
  r.alpha = alpha;
  r.rate_label = RateLabelFromAlpha(alpha);
  return r;
}

}  // namespace

TEST_CASE("wav round trip is exact to pcm16 quantization") {
  auto dir = testing::ScratchDir("wav");
  auto clip = testing::Tone(440.0, 0.25);
  clip.samples[0] = 1.5f;
  clip.samples[1] = -1.5f;
  SaveWav(dir / "a.wav", clip);
  auto back = LoadWav(dir / "a.wav");
  REQUIRE(back.size() == clip.size());
  CHECK(back.sample_rate == 16000);
  CHECK(back.samples[0] == doctest::Approx(32767.0 / 32768.0));
  CHECK(back.samples[1] == -1.0f);
  for (std::size_t i = 2; i < clip.size(); ++i) {
    const double q = std::clamp(std::round(clip.samples[i] * 32768.0), -32768.0, 32767.0) / 32768.0;
    CHECK(back.samples[i] == static_cast<float>(q));
  }
  auto info = ProbeWav(dir / "a.wav");
  CHECK(info.num_channels == 1);
  CHECK(info.bits_per_sample == 16);
  CHECK(info.num_samples == clip.size());
}

TEST_CASE("wav loader error kinds") {
  auto dir = testing::ScratchDir("wav-bad");
  WriteBytes(dir / "stereo.wav", WavHeader(2, 16, 16000, 8) + std::string(8, '\0'));
  WriteBytes(dir / "pcm8.wav", WavHeader(1, 8, 16000, 4) + std::string(4, '\0'));
  WriteBytes(dir / "junk.wav", "not a wave file at all, definitely not");
  WriteBytes(dir / "trunc.wav", WavHeader(1, 16, 16000, 100).substr(0, 20));
  CHECK(KindOf([&] { LoadWav(dir / "stereo.wav"); }) == ErrorKind::kUnsupportedFormat);
  CHECK(KindOf([&] { LoadWav(dir / "pcm8.wav"); }) == ErrorKind::kUnsupportedFormat);
  CHECK(KindOf([&] { LoadWav(dir / "junk.wav"); }) == ErrorKind::kFormat);
  CHECK(KindOf([&] { LoadWav(dir / "trunc.wav"); }) == ErrorKind::kFormat);
  CHECK(KindOf([&] { LoadWav(dir / "missing.wav"); }) == ErrorKind::kIo);
}

TEST_CASE("clip validation") {
  AudioClip c;
  CHECK(KindOf([&] { ValidateClip(c); }) == ErrorKind::kArgument);
  c.samples = {0.1f, NAN};
  CHECK(KindOf([&] { ValidateClip(c); }) == ErrorKind::kArgument);
  c.samples = {0.1f};
  c.sample_rate = 0;
  CHECK(KindOf([&] { ValidateClip(c); }) == ErrorKind::kArgument);
}

TEST_CASE("synthesized speech is deterministic and carries the profile pitch") {
  auto prof = MakeSpeakerProfile(7);
  CHECK(prof.f0 >= 100.0);
  CHECK(prof.f0 <= 300.0);
  auto a = SynthUtterance(prof, 2.0, 4.0, 11);
  auto b = SynthUtterance(prof, 2.0, 4.0, 11);
  auto c = SynthUtterance(prof, 2.0, 4.0, 12);
  CHECK(a.size() == 32000);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != c.samples);
  for (float s : a.samples) REQUIRE(std::abs(s) <= 1.0f);
  // The harmonic source puts energy at multiples of f0; the fundamental or a
  // low harmonic dominates below the first formant region.
  const double peak = testing::DominantFrequency(a.samples, 16000, 0.8 * prof.f0, 1.2 * prof.f0);
  CHECK(std::abs(peak - prof.f0) / prof.f0 < 0.01);
}

TEST_CASE("synth argument ranges") {
  SynthSpeakerProfile p;
  CHECK(KindOf([&] { SynthUtterance(p, 0.2, 4.0, 1); }) == ErrorKind::kArgument);
  CHECK(KindOf([&] { SynthUtterance(p, 2.0, 0.5, 1); }) == ErrorKind::kArgument);
  p.f0 = 90;
  CHECK(KindOf([&] { ValidateProfile(p); }) == ErrorKind::kArgument);
  p.f0 = 150;
  p.formant_centers[2] = 9000;
  CHECK(KindOf([&] { ValidateProfile(p); }) == ErrorKind::kArgument);
}

TEST_CASE("rate labels and derived ids") {
  CHECK(RateLabelFromAlpha(0.7) == RateLabel::kSlow);
  CHECK(RateLabelFromAlpha(1.0) == RateLabel::kNormal);
  CHECK(RateLabelFromAlpha(1.4) == RateLabel::kFast);
  CHECK(ParseRateLabel("fast") == RateLabel::kFast);
  CHECK(KindOf([] { ParseRateLabel("quick"); }) == ErrorKind::kFormat);
  CHECK(DerivedUttId("spk01_u03", 0.7) == "spk01_u03_a0.7");
  CHECK(SourceUttId("spk01_u03_a0.7") == "spk01_u03");
  CHECK(SourceUttId("spk01_u03") == "spk01_u03");
  CHECK(*AlphaFromUttId("spk01_u03_a1.5") == doctest::Approx(1.5));
  CHECK(!AlphaFromUttId("spk01_u03").has_value());
}

TEST_CASE("manifest round trip and scan") {
  auto dir = testing::ScratchDir("manifest");
  auto prof = MakeSpeakerProfile(1);
  fs::create_directories(dir / "audio" / "spkA");
  fs::create_directories(dir / "audio" / "spkB");
  SaveWav(dir / "audio" / "spkA" / "spkA_u00.wav", SynthUtterance(prof, 1.0, 4.0, 1));
  SaveWav(dir / "audio" / "spkA" / "spkA_u00_a0.5.wav", SynthUtterance(prof, 1.0, 4.0, 2));
  SaveWav(dir / "audio" / "spkB" / "spkB_u00.wav", SynthUtterance(prof, 1.0, 4.0, 3));
  WriteBytes(dir / "audio" / "spkB" / "broken.wav", "garbage");
  auto scan = BuildManifest(dir / "audio");
  CHECK(scan.records.size() == 3);
  CHECK(scan.errors.size() == 1);
  for (const auto &r : scan.records)
    if (r.utt_id == "spkA_u00_a0.5") {
      CHECK(r.alpha == 0.5);
      CHECK(r.rate_label == RateLabel::kSlow);
    }
  WriteManifest(dir / "data" / "m.tsv", scan.records);
  auto back = ReadManifest(dir / "data" / "m.tsv");
  REQUIRE(back.size() == scan.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].utt_id == scan.records[i].utt_id);
    CHECK(back[i].speaker_id == scan.records[i].speaker_id);
    CHECK(back[i].alpha == scan.records[i].alpha);
    CHECK(fs::equivalent(back[i].path, scan.records[i].path));
  }
  WriteBytes(dir / "bad.tsv", "u1\ts1\tx.wav\t0.5\tfast\n");
  try {
    ReadManifest(dir / "bad.tsv");
    FAIL("expected a format error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kFormat);
    CHECK(std::string(e.what()).find(":1") != std::string::npos);
  }
}

TEST_CASE("trial lists exclude same-source pairs and contain both classes") {
  std::vector<UtteranceRecord> m;
  for (int s = 0; s < 3; ++s)
    for (int u = 0; u < 3; ++u) {
      const std::string utt = "s" + std::to_string(s) + "_u" + std::to_string(u);
      m.push_back(Rec(utt, "s" + std::to_string(s), 1.0));
      m.push_back(Rec(DerivedUttId(utt, 0.5), "s" + std::to_string(s), 0.5));
    }
  auto trials = MakeTrials(m, RateSelector::Alpha(1.0), RateSelector::Alpha(0.5));
  // 9 enrollments x 9 tests minus the 9 pairs sharing a source.
  CHECK(trials.size() == 72);
  std::size_t targets = 0;
  for (const auto &t : trials) {
    CHECK(SourceUttId(t.enroll_utt) != SourceUttId(t.test_utt));
    CHECK(t.is_target == (t.enroll_utt.substr(0, 2) == t.test_utt.substr(0, 2)));
    targets += t.is_target;
  }
  CHECK(targets == 3 * 3 * 2);
  auto dir = testing::ScratchDir("trials");
  WriteTrials(dir / "t.trials", trials);
  auto back = ReadTrials(dir / "t.trials");
  REQUIRE(back.size() == trials.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].enroll_utt == trials[i].enroll_utt);
    CHECK(back[i].is_target == trials[i].is_target);
  }
  std::vector<UtteranceRecord> one(m.begin(), m.begin() + 6);
  CHECK(KindOf([&] { MakeTrials(one, RateSelector::Alpha(1.0), RateSelector::Alpha(0.5)); }) ==
        ErrorKind::kEmptyTrials);
  CHECK(KindOf([&] { MakeTrials(m, RateSelector::Alpha(1.0), RateSelector::Alpha(2.0)); }) ==
        ErrorKind::kEmptyTrials);
}
