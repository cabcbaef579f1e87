// include/rateinv/model/checkpoint.h

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

#ifndef RATEINV_MODEL_CHECKPOINT_H_
#define RATEINV_MODEL_CHECKPOINT_H_

// Binary checkpoint: magic line, a "key=value" text block closed by "end",
// then named arrays (u32 name length, name, u8 dtype, u32 rank, u32 dims,
// little-endian payload). Arrays are stored as f64 by default so that a
// reload is bit-exact; f32 storage is available for compact exports.

#include <map>
#include <string>
#include <vector>

#include "rateinv/model/params.h"

namespace rateinv {

enum class CheckpointDtype : uint8_t { kF64 = 0, kF32 = 1 };

struct Checkpoint {
  ModelParams params;
  // Free-form metadata (step, seed, preset, ...). Model config keys are
  // added and consumed by the writer/reader and do not appear here.
  std::map<std::string, std::string> meta;
  // Extra arrays, e.g. optimizer momentum, keyed by name.
  std::map<std::string, std::vector<double>> extra;
};

void WriteCheckpoint(const std::string &path, const Checkpoint &ckpt,
                     CheckpointDtype dtype = CheckpointDtype::kF64);

// Throws Error(kIo) if unreadable, Error(kFormat) on any structural problem
// (bad magic, unknown tensor, shape mismatch, truncation).
Checkpoint ReadCheckpoint(const std::string &path);

}  // namespace rateinv

#endif  // RATEINV_MODEL_CHECKPOINT_H_
