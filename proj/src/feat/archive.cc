// src/feat/archive.cc

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

#include "rateinv/feat/archive.h"

#include <bit>
#include <cstring>
#include <sstream>

#include "rateinv/base/error.h"

namespace rateinv {

static_assert(std::endian::native == std::endian::little,
              "feature archives are written in host order; little-endian hosts only");

namespace {
constexpr char kMagic[4] = {'R', 'I', 'F', 'M'};
}

FeatureArchiveWriter::FeatureArchiveWriter(const std::filesystem::path &archive,
                                           const std::filesystem::path &index) {
  if (archive.has_parent_path()) std::filesystem::create_directories(archive.parent_path());
  data_.open(archive, std::ios::binary | std::ios::trunc);
  index_.open(index, std::ios::trunc);
  if (!data_ || !index_) Fail(ErrorKind::kIo, "cannot create feature archive " + archive.string());
}

void FeatureArchiveWriter::Write(const std::string &utt_id, const FeatureMatrix &features) {
  const auto rows = static_cast<uint32_t>(features.NumRows());
  const auto cols = static_cast<uint32_t>(features.NumCols());
  index_ << utt_id << '\t' << offset_ << '\n';
  data_.write(kMagic, 4);
  data_.write(reinterpret_cast<const char *>(&rows), 4);
  data_.write(reinterpret_cast<const char *>(&cols), 4);
  const auto bytes = static_cast<std::streamsize>(sizeof(float) * rows * cols);
  data_.write(reinterpret_cast<const char *>(features.Data().data()), bytes);
  if (!data_ || !index_) Fail(ErrorKind::kIo, "feature archive write failed");
  offset_ += 12 + static_cast<uint64_t>(bytes);
}

void FeatureArchiveWriter::Close() {
  if (data_.is_open()) data_.close();
  if (index_.is_open()) index_.close();
}

FeatureArchiveWriter::~FeatureArchiveWriter() { Close(); }

FeatureMatrix ReadFeatureRecord(const std::filesystem::path &archive, uint64_t offset) {
  std::ifstream in(archive, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + archive.string());
  in.seekg(static_cast<std::streamoff>(offset));
  char magic[4];
  uint32_t rows = 0, cols = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char *>(&rows), 4);
  in.read(reinterpret_cast<char *>(&cols), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    Fail(ErrorKind::kFormat, archive.string() + ": bad feature record at offset " +
                                 std::to_string(offset));
  FeatureMatrix m(rows, cols);
  in.read(reinterpret_cast<char *>(m.Data().data()),
          static_cast<std::streamsize>(sizeof(float) * rows * cols));
  if (!in) Fail(ErrorKind::kFormat, archive.string() + ": truncated feature record");
  return m;
}

std::map<std::string, uint64_t> ReadFeatureIndex(const std::filesystem::path &index) {
  std::ifstream in(index);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + index.string());
  std::map<std::string, uint64_t> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      Fail(ErrorKind::kFormat, index.string() + ":" + std::to_string(line_no) + ": missing tab");
    out[line.substr(0, tab)] = std::stoull(line.substr(tab + 1));
  }
  return out;
}

std::map<std::string, FeatureMatrix> ReadFeatureArchive(const std::filesystem::path &archive,
                                                        const std::filesystem::path &index) {
  std::map<std::string, FeatureMatrix> out;
  for (const auto &[utt, offset] : ReadFeatureIndex(index)) {
    FeatureMatrix m = ReadFeatureRecord(archive, offset);
    m.utt_id = utt;
    out.emplace(utt, std::move(m));
  }
  return out;
}

}  // namespace rateinv
