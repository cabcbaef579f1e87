// src/feat/feature-matrix.cc

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

#include "rateinv/feat/feature-matrix.h"

#include <algorithm>

#include "rateinv/base/error.h"

namespace rateinv {

FeatureMatrix FeatureMatrix::RowRange(std::size_t begin, std::size_t count) const {
  if (begin + count > rows_) Fail(ErrorKind::kDimension, "row range out of bounds");
  FeatureMatrix out(count, cols_);
  std::copy(data_.begin() + begin * cols_, data_.begin() + (begin + count) * cols_,
            out.data_.begin());
  out.utt_id = utt_id;
  return out;
}

}  // namespace rateinv
