// src/kernels/kernels.cc

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

#include "rateinv/kernels/kernels.h"

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels-internal.h"
#include "rateinv/base/error.h"

namespace rateinv {
namespace kernels {

namespace {

const KernelTable kScalarTable = {
    Backend::kScalar, "scalar", internal::DotF64Scalar, internal::DotF32Scalar,
    internal::AxpyF64Scalar, internal::MatVecF64Scalar};

#ifdef RATEINV_HAVE_AVX2
const KernelTable kAvx2Table = {
    Backend::kAvx2, "avx2", internal::DotF64Avx2, internal::DotF32Avx2,
    internal::AxpyF64Avx2, internal::MatVecF64Avx2};
#endif

const KernelTable *InitialTable() {
  const char *env = std::getenv("RATEINV_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return &kScalarTable;
  const KernelTable *avx2 = Avx2Kernels();
  return avx2 != nullptr ? avx2 : &kScalarTable;
}

std::atomic<const KernelTable *> &ActivePointer() {
  static std::atomic<const KernelTable *> active{InitialTable()};
  return active;
}

void CheckSize(bool ok, const char *what) {
  if (!ok) Fail(ErrorKind::kDimension, std::string("kernel size mismatch: ") + what);
}

}  // namespace

const KernelTable &ScalarKernels() { return kScalarTable; }

bool CpuSupportsAvx2() {
#if defined(RATEINV_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable *Avx2Kernels() {
#ifdef RATEINV_HAVE_AVX2
  static const bool supported = CpuSupportsAvx2();
  return supported ? &kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable &ActiveKernels() { return *ActivePointer().load(std::memory_order_acquire); }

void SelectBackend(Backend backend) {
  const KernelTable *table = backend == Backend::kScalar ? &kScalarTable : Avx2Kernels();
  if (table == nullptr)
    Fail(ErrorKind::kArgument, std::string("kernel backend not available: ") +
                                   BackendName(backend));
  ActivePointer().store(table, std::memory_order_release);
}

const char *BackendName(Backend backend) {
  return backend == Backend::kScalar ? "scalar" : "avx2";
}

ScopedBackend::ScopedBackend(Backend backend) : previous_(ActiveKernels().backend) {
  SelectBackend(backend);
}

ScopedBackend::~ScopedBackend() { SelectBackend(previous_); }

double Dot(std::span<const double> a, std::span<const double> b) {
  CheckSize(a.size() == b.size(), "Dot");
  return ActiveKernels().dot_f64(a.data(), b.data(), a.size());
}

float Dot(std::span<const float> a, std::span<const float> b) {
  CheckSize(a.size() == b.size(), "Dot");
  return ActiveKernels().dot_f32(a.data(), b.data(), a.size());
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  CheckSize(x.size() == y.size(), "Axpy");
  ActiveKernels().axpy_f64(alpha, x.data(), y.data(), x.size());
}

void MatVec(std::span<const double> w, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) {
  CheckSize(w.size() == rows * cols && x.size() == cols && y.size() == rows, "MatVec");
  ActiveKernels().matvec_f64(w.data(), rows, cols, x.data(), y.data());
}

void MatTransVecAdd(std::span<const double> w, std::size_t rows,
                    std::size_t cols, std::span<const double> y_grad,
                    std::span<double> x_grad) {
  CheckSize(w.size() == rows * cols && y_grad.size() == rows && x_grad.size() == cols,
            "MatTransVecAdd");
  auto axpy = ActiveKernels().axpy_f64;
  for (std::size_t r = 0; r < rows; ++r)
    if (y_grad[r] != 0.0) axpy(y_grad[r], w.data() + r * cols, x_grad.data(), cols);
}

void RankOneAdd(double scale, std::span<const double> u,
                std::span<const double> v, std::span<double> w) {
  CheckSize(w.size() == u.size() * v.size(), "RankOneAdd");
  auto axpy = ActiveKernels().axpy_f64;
  const std::size_t cols = v.size();
  for (std::size_t r = 0; r < u.size(); ++r)
    if (u[r] != 0.0) axpy(scale * u[r], v.data(), w.data() + r * cols, cols);
}

}  // namespace kernels
}  // namespace rateinv
