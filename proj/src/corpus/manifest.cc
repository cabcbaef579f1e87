// src/corpus/manifest.cc

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

#include "rateinv/corpus/manifest.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rateinv/base/error.h"
#include "rateinv/corpus/audio.h"

namespace rateinv {

namespace fs = std::filesystem;

RateLabel RateLabelFromAlpha(double alpha) {
  if (std::fabs(alpha - 1.0) <= kNormalAlphaTolerance) return RateLabel::kNormal;
  return alpha < 1.0 ? RateLabel::kSlow : RateLabel::kFast;
}

const char *RateLabelName(RateLabel label) {
  switch (label) {
    case RateLabel::kSlow: return "slow";
    case RateLabel::kNormal: return "normal";
    case RateLabel::kFast: return "fast";
  }
  return "normal";
}

RateLabel ParseRateLabel(std::string_view name) {
  if (name == "slow") return RateLabel::kSlow;
  if (name == "normal") return RateLabel::kNormal;
  if (name == "fast") return RateLabel::kFast;
  Fail(ErrorKind::kFormat, "unknown rate label '" + std::string(name) + "'");
}

std::string DerivedUttId(std::string_view utt_id, double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_a%.1f", alpha);
  return std::string(utt_id) + buf;
}

std::optional<double> AlphaFromUttId(std::string_view utt_id) {
  const auto pos = utt_id.rfind("_a");
  if (pos == std::string_view::npos) return std::nullopt;
  std::string_view tail = utt_id.substr(pos + 2);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), value);
  if (ec != std::errc() || ptr != tail.data() + tail.size() || !(value > 0.0))
    return std::nullopt;
  return value;
}

std::string SourceUttId(std::string_view utt_id) {
  if (!AlphaFromUttId(utt_id)) return std::string(utt_id);
  return std::string(utt_id.substr(0, utt_id.rfind("_a")));
}

namespace {

std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

void WriteManifest(const fs::path &file, const std::vector<UtteranceRecord> &records) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + file.string());
  const fs::path base = file.has_parent_path() ? file.parent_path() : fs::path(".");
  for (const auto &r : records) {
    // Stored relative to the manifest's directory, as ReadManifest expects.
    fs::path p = fs::absolute(r.path);
    std::error_code ec;
    fs::path rel = fs::relative(p, fs::absolute(base), ec);
    if (!ec && !rel.empty()) p = rel;
    out << r.utt_id << '\t' << r.speaker_id << '\t' << p.generic_string() << '\t'
        << FormatDouble(r.alpha) << '\t' << RateLabelName(r.rate_label) << '\n';
  }
  if (!out) Fail(ErrorKind::kIo, "write failed for " + file.string());
}

std::vector<UtteranceRecord> ReadManifest(const fs::path &file) {
  std::ifstream in(file);
  if (!in) Fail(ErrorKind::kIo, "cannot open manifest " + file.string());
  const fs::path base = file.has_parent_path() ? file.parent_path() : fs::path(".");
  std::vector<UtteranceRecord> records;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string &why) {
    Fail(ErrorKind::kFormat,
         file.string() + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = SplitTabs(line);
    if (fields.size() != 5) fail("expected 5 tab-separated fields");
    UtteranceRecord r;
    r.utt_id = std::string(fields[0]);
    r.speaker_id = std::string(fields[1]);
    if (r.utt_id.empty() || r.speaker_id.empty()) fail("empty utt_id or speaker_id");
    fs::path p{std::string(fields[2])};
    r.path = p.is_absolute() ? p : base / p;
    auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), r.alpha);
    if (ec != std::errc() || ptr != fields[3].data() + fields[3].size() || !(r.alpha > 0.0))
      fail("alpha must be a positive number");
    try {
      r.rate_label = ParseRateLabel(fields[4]);
    } catch (const Error &e) {
      fail(e.what());
    }
    if (r.rate_label != RateLabelFromAlpha(r.alpha))
      fail("rate label '" + std::string(fields[4]) + "' contradicts alpha " +
           std::string(fields[3]));
    records.push_back(std::move(r));
  }
  return records;
}

ManifestScan BuildManifest(const fs::path &root, const std::map<std::string, double> &alphas) {
  ManifestScan scan;
  if (!fs::is_directory(root))
    Fail(ErrorKind::kIo, "corpus root is not a directory: " + root.string());
  std::vector<fs::path> speakers;
  for (const auto &entry : fs::directory_iterator(root))
    if (entry.is_directory()) speakers.push_back(entry.path());
  std::sort(speakers.begin(), speakers.end());
  std::set<std::string> seen;
  for (const auto &spk_dir : speakers) {
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(spk_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".wav")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto &f : files) {
      UtteranceRecord r;
      r.utt_id = f.stem().string();
      r.speaker_id = spk_dir.filename().string();
      r.path = f;
      if (!seen.insert(r.utt_id).second) {
        scan.errors.push_back({f, "duplicate utt_id '" + r.utt_id + "'"});
        continue;
      }
      try {
        ProbeWav(f);
      } catch (const Error &e) {
        scan.errors.push_back({f, e.what()});
        continue;
      }
      if (auto it = alphas.find(r.utt_id); it != alphas.end())
        r.alpha = it->second;
      else if (auto a = AlphaFromUttId(r.utt_id))
        r.alpha = *a;
      r.rate_label = RateLabelFromAlpha(r.alpha);
      scan.records.push_back(std::move(r));
    }
  }
  if (scan.records.empty() && scan.errors.empty())
    scan.warnings.push_back("no .wav files found under " + root.string());
  return scan;
}

}  // namespace rateinv
