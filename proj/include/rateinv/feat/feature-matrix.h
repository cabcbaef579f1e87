// include/rateinv/feat/feature-matrix.h

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

#ifndef RATEINV_FEAT_FEATURE_MATRIX_H_
#define RATEINV_FEAT_FEATURE_MATRIX_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rateinv {

// Row-major frames x coefficients matrix. Frame shift is 10 ms.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols, float fill = 0.0f)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t NumRows() const { return rows_; }
  std::size_t NumCols() const { return cols_; }
  bool Empty() const { return rows_ == 0; }

  float &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  float operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<float> Row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const float> Row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const float> Data() const { return data_; }
  std::span<float> Data() { return data_; }

  // Rows [begin, begin + count).
  FeatureMatrix RowRange(std::size_t begin, std::size_t count) const;

  bool operator==(const FeatureMatrix &other) const = default;

  std::string utt_id;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<float> data_;
};

}  // namespace rateinv

#endif  // RATEINV_FEAT_FEATURE_MATRIX_H_
