// src/corpus/audio.cc

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

#include "rateinv/corpus/audio.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "rateinv/base/error.h"

namespace rateinv {

namespace {

uint32_t ReadU32(const unsigned char *p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const unsigned char *p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string *out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string *out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct ParsedWav {
  WavInfo info;
  std::size_t data_offset = 0;
  std::size_t data_bytes = 0;
};

ParsedWav ParseHeader(const std::string &bytes, const std::string &name) {
  auto fail = [&](const std::string &why) {
    Fail(ErrorKind::kFormat, name + ": " + why);
  };
  const auto *p = reinterpret_cast<const unsigned char *>(bytes.data());
  if (bytes.size() < 12 || std::memcmp(p, "RIFF", 4) != 0 ||
      std::memcmp(p + 8, "WAVE", 4) != 0)
    fail("not a RIFF/WAVE file");
  ParsedWav parsed;
  bool have_fmt = false, have_data = false;
  uint16_t format_tag = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint32_t chunk_size = ReadU32(p + pos + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(p + pos, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body + 16 > bytes.size()) fail("truncated fmt chunk");
      format_tag = ReadU16(p + body);
      parsed.info.num_channels = ReadU16(p + body + 2);
      parsed.info.sample_rate = static_cast<int>(ReadU32(p + body + 4));
      parsed.info.bits_per_sample = ReadU16(p + body + 14);
      have_fmt = true;
    } else if (std::memcmp(p + pos, "data", 4) == 0) {
      if (!have_fmt) fail("data chunk before fmt chunk");
      parsed.data_offset = body;
      parsed.data_bytes = std::min<std::size_t>(chunk_size, bytes.size() - body);
      have_data = true;
      break;
    }
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (!have_fmt) fail("missing fmt chunk");
  if (!have_data) fail("missing data chunk");
  if (parsed.info.sample_rate <= 0) fail("non-positive sample rate");
  // WAVE_FORMAT_EXTENSIBLE (0xFFFE) is accepted when it carries PCM16.
  if (format_tag != 1 && format_tag != 0xFFFE)
    Fail(ErrorKind::kUnsupportedFormat, name + ": only PCM is supported");
  if (parsed.info.num_channels != 1)
    Fail(ErrorKind::kUnsupportedFormat,
         name + ": " + std::to_string(parsed.info.num_channels) +
             " channels; only mono is supported");
  if (parsed.info.bits_per_sample != 16)
    Fail(ErrorKind::kUnsupportedFormat,
         name + ": " + std::to_string(parsed.info.bits_per_sample) +
             "-bit samples; only 16-bit PCM is supported");
  parsed.info.num_samples = parsed.data_bytes / 2;
  return parsed;
}

}  // namespace

void ValidateClip(const AudioClip &clip) {
  if (clip.sample_rate <= 0) Fail(ErrorKind::kArgument, "sample rate must be positive");
  if (clip.samples.empty()) Fail(ErrorKind::kArgument, "audio clip is empty");
  for (float s : clip.samples)
    if (!std::isfinite(s)) Fail(ErrorKind::kArgument, "audio clip has non-finite samples");
  if (!(clip.source_alpha > 0.0)) Fail(ErrorKind::kArgument, "source_alpha must be positive");
}

WavInfo ProbeWav(const std::filesystem::path &path) {
  return ParseHeader(ReadFile(path), path.string()).info;
}

AudioClip LoadWav(const std::filesystem::path &path) {
  const std::string bytes = ReadFile(path);
  const ParsedWav parsed = ParseHeader(bytes, path.string());
  if (parsed.info.num_samples == 0)
    Fail(ErrorKind::kFormat, path.string() + ": no samples");
  AudioClip clip;
  clip.sample_rate = parsed.info.sample_rate;
  clip.samples.resize(parsed.info.num_samples);
  const auto *p = reinterpret_cast<const unsigned char *>(bytes.data()) + parsed.data_offset;
  for (std::size_t i = 0; i < parsed.info.num_samples; ++i) {
    const auto v = static_cast<int16_t>(ReadU16(p + 2 * i));
    clip.samples[i] = static_cast<float>(v) / 32768.0f;
  }
  return clip;
}

void SaveWav(const std::filesystem::path &path, const AudioClip &clip) {
  ValidateClip(clip);
  const auto n = static_cast<uint32_t>(clip.samples.size());
  std::string out;
  out.reserve(44 + 2 * n);
  out.append("RIFF");
  PutU32(&out, 36 + 2 * n);
  out.append("WAVEfmt ");
  PutU32(&out, 16);
  PutU16(&out, 1);  // PCM
  PutU16(&out, 1);  // mono
  PutU32(&out, static_cast<uint32_t>(clip.sample_rate));
  PutU32(&out, static_cast<uint32_t>(clip.sample_rate) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  out.append("data");
  PutU32(&out, 2 * n);
  for (float s : clip.samples) {
    const double scaled = std::nearbyint(static_cast<double>(s) * 32768.0);
    const auto v = static_cast<int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    PutU16(&out, static_cast<uint16_t>(v));
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) Fail(ErrorKind::kIo, "cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) Fail(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace rateinv
