// include/rateinv/feat/archive.h

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

#ifndef RATEINV_FEAT_ARCHIVE_H_
#define RATEINV_FEAT_ARCHIVE_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "rateinv/feat/feature-matrix.h"

namespace rateinv {

// Binary feature archive. Each record is the 4-byte magic "RIFM", u32 rows,
// u32 cols and a little-endian f32 row-major payload. A companion text
// index holds "utt_id<TAB>byte_offset" lines.
class FeatureArchiveWriter {
 public:
  FeatureArchiveWriter(const std::filesystem::path &archive,
                       const std::filesystem::path &index);
  void Write(const std::string &utt_id, const FeatureMatrix &features);
  void Close();
  ~FeatureArchiveWriter();

 private:
  std::ofstream data_, index_;
  uint64_t offset_ = 0;
};

// Reads the record starting at `offset`. Throws Error(kFormat) on a bad
// magic or truncated payload.
FeatureMatrix ReadFeatureRecord(const std::filesystem::path &archive, uint64_t offset);

std::map<std::string, uint64_t> ReadFeatureIndex(const std::filesystem::path &index);

// Loads every record listed in the index.
std::map<std::string, FeatureMatrix> ReadFeatureArchive(
    const std::filesystem::path &archive, const std::filesystem::path &index);

}  // namespace rateinv

#endif  // RATEINV_FEAT_ARCHIVE_H_
