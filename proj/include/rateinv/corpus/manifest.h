// include/rateinv/corpus/manifest.h

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

#ifndef RATEINV_CORPUS_MANIFEST_H_
#define RATEINV_CORPUS_MANIFEST_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rateinv {

enum class RateLabel { kSlow = 0, kNormal = 1, kFast = 2 };
constexpr int kNumRateLabels = 3;

// |alpha - 1| <= kNormalAlphaTolerance counts as normal.
constexpr double kNormalAlphaTolerance = 1e-9;

// Total function of alpha: slow below 1, normal at 1, fast above 1.
RateLabel RateLabelFromAlpha(double alpha);
const char *RateLabelName(RateLabel label);
// Throws Error(kFormat) for anything but "slow", "normal", "fast".
RateLabel ParseRateLabel(std::string_view name);

struct UtteranceRecord {
  std::string utt_id;
  std::string speaker_id;
  std::filesystem::path path;
  double alpha = 1.0;
  RateLabel rate_label = RateLabel::kNormal;
};

// Derived-utterance naming: "{utt}_a{alpha}" with alpha printed to one
// decimal, e.g. "spk01_u03_a0.7".
std::string DerivedUttId(std::string_view utt_id, double alpha);
// Inverse of DerivedUttId; returns the id unchanged for originals.
std::string SourceUttId(std::string_view utt_id);
// The alpha encoded in a derived id, if any.
std::optional<double> AlphaFromUttId(std::string_view utt_id);

// Line format: utt_id<TAB>speaker_id<TAB>path<TAB>alpha<TAB>rate_label.
// Relative paths are resolved against the manifest's directory on read.
void WriteManifest(const std::filesystem::path &file,
                   const std::vector<UtteranceRecord> &records);
// Throws Error(kFormat) with the offending line number. Rejects records
// whose rate_label disagrees with their alpha.
std::vector<UtteranceRecord> ReadManifest(const std::filesystem::path &file);

struct ManifestIssue {
  std::filesystem::path path;
  std::string message;
};

struct ManifestScan {
  std::vector<UtteranceRecord> records;
  std::vector<ManifestIssue> errors;    // one entry per bad file
  std::vector<std::string> warnings;    // e.g. empty directory
};

// Scans root/<speaker_id>/<utt>.wav. utt_id is the file stem; alpha comes
// from `alphas` when present, else from a "_a{alpha}" suffix, else 1.0.
// Unreadable files become error entries; the scan itself never fails for
// per-file problems.
ManifestScan BuildManifest(const std::filesystem::path &root,
                           const std::map<std::string, double> &alphas = {});

}  // namespace rateinv

#endif  // RATEINV_CORPUS_MANIFEST_H_
