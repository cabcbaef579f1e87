// src/kernels/kernels-internal.h

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

#ifndef RATEINV_KERNELS_KERNELS_INTERNAL_H_
#define RATEINV_KERNELS_KERNELS_INTERNAL_H_

#include "rateinv/kernels/kernels.h"

namespace rateinv {
namespace kernels {
namespace internal {

double DotF64Scalar(const double *a, const double *b, std::size_t n);
float DotF32Scalar(const float *a, const float *b, std::size_t n);
void AxpyF64Scalar(double alpha, const double *x, double *y, std::size_t n);
void MatVecF64Scalar(const double *w, std::size_t rows, std::size_t cols,
                     const double *x, double *y);

#ifdef RATEINV_HAVE_AVX2
double DotF64Avx2(const double *a, const double *b, std::size_t n);
float DotF32Avx2(const float *a, const float *b, std::size_t n);
void AxpyF64Avx2(double alpha, const double *x, double *y, std::size_t n);
void MatVecF64Avx2(const double *w, std::size_t rows, std::size_t cols,
                   const double *x, double *y);
#endif

}  // namespace internal
}  // namespace kernels
}  // namespace rateinv

#endif  // RATEINV_KERNELS_KERNELS_INTERNAL_H_
