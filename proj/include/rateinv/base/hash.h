// include/rateinv/base/hash.h

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

#ifndef RATEINV_BASE_HASH_H_
#define RATEINV_BASE_HASH_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace rateinv {

// FNV-1a, 64 bit. Stable across platforms; used for stage stamps and for
// deriving per-item seeds from string ids.
inline uint64_t Fnv1a64(std::string_view data,
                        uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string HexDigest(uint64_t h);

}  // namespace rateinv

#endif  // RATEINV_BASE_HASH_H_
