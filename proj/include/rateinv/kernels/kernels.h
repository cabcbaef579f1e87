// include/rateinv/kernels/kernels.h

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

#ifndef RATEINV_KERNELS_KERNELS_H_
#define RATEINV_KERNELS_KERNELS_H_

// Data-parallel inner loops shared by every numeric module. Each kernel has
// a scalar reference implementation and, on x86-64, an AVX2/FMA variant.
// The variant is picked once at startup from CPUID (overridable with the
// RATEINV_SIMD environment variable: "scalar" or "avx2") and can be switched
// at runtime for equivalence testing.
//
// Results of different backends agree to rounding, not bitwise: the AVX2
// versions reassociate the sums. A single backend is deterministic.

#include <cstddef>
#include <span>

namespace rateinv {
namespace kernels {

enum class Backend { kScalar, kAvx2 };

struct KernelTable {
  Backend backend;
  const char *name;
  double (*dot_f64)(const double *a, const double *b, std::size_t n);
  float (*dot_f32)(const float *a, const float *b, std::size_t n);
  // y += alpha * x
  void (*axpy_f64)(double alpha, const double *x, double *y, std::size_t n);
  // y[r] = sum_c w[r * cols + c] * x[c], w row-major.
  void (*matvec_f64)(const double *w, std::size_t rows, std::size_t cols,
                     const double *x, double *y);
};

const KernelTable &ScalarKernels();
// nullptr when not compiled in or when the CPU lacks AVX2+FMA.
const KernelTable *Avx2Kernels();
bool CpuSupportsAvx2();

const KernelTable &ActiveKernels();
// Throws Error(kArgument) if the backend is unavailable.
void SelectBackend(Backend backend);
const char *BackendName(Backend backend);

// Restores the previously active backend on destruction.
class ScopedBackend {
 public:
  explicit ScopedBackend(Backend backend);
  ~ScopedBackend();
  ScopedBackend(const ScopedBackend &) = delete;
  ScopedBackend &operator=(const ScopedBackend &) = delete;

 private:
  Backend previous_;
};

double Dot(std::span<const double> a, std::span<const double> b);
float Dot(std::span<const float> a, std::span<const float> b);
void Axpy(double alpha, std::span<const double> x, std::span<double> y);

// y = W x
void MatVec(std::span<const double> w, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
// x_grad += W^T y_grad
void MatTransVecAdd(std::span<const double> w, std::size_t rows,
                    std::size_t cols, std::span<const double> y_grad,
                    std::span<double> x_grad);
// W += scale * u v^T
void RankOneAdd(double scale, std::span<const double> u,
                std::span<const double> v, std::span<double> w);

}  // namespace kernels
}  // namespace rateinv

#endif  // RATEINV_KERNELS_KERNELS_H_
