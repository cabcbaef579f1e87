// tests/test-util.h

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

#ifndef RATEINV_TESTS_TEST_UTIL_H_
#define RATEINV_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "rateinv/corpus/audio.h"

namespace rateinv {
namespace testing {

inline AudioClip Tone(double hz, double seconds, int sr = 16000, double amp = 0.5) {
  AudioClip c;
  c.sample_rate = sr;
  c.samples.resize(static_cast<std::size_t>(std::llround(seconds * sr)));
  for (std::size_t i = 0; i < c.samples.size(); ++i)
    c.samples[i] = static_cast<float>(amp * std::sin(2.0 * std::numbers::pi * hz * i / sr));
  return c;
}

// Frequency of the largest Hann-windowed spectral peak in [lo, hi] Hz,
// zero-padded to >= 2^18 points and refined by parabolic interpolation of
// the log magnitude.
inline double DominantFrequency(const std::vector<float> &x, int sr, double lo = 50.0,
                                double hi = 4000.0) {
  std::size_t n = 1 << 18;
  while (n < 2 * x.size()) n <<= 1;
  std::vector<double> buf(n, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / x.size());
    buf[i] = w * x[i];
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, buf);
  const double df = static_cast<double>(sr) / n;
  std::size_t k0 = static_cast<std::size_t>(lo / df), k1 = static_cast<std::size_t>(hi / df);
  std::size_t best = k0;
  for (std::size_t k = k0; k <= k1; ++k)
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  const double a = std::log(std::abs(spec[best - 1]) + 1e-300);
  const double b = std::log(std::abs(spec[best]) + 1e-300);
  const double c = std::log(std::abs(spec[best + 1]) + 1e-300);
  const double den = a - 2 * b + c;
  const double off = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
  return (static_cast<double>(best) + off) * df;
}

inline std::vector<double> RandomVector(std::mt19937_64 &rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(n);
  for (auto &x : v) x = g(rng);
  return v;
}

// Central differences of f at x with step h.
inline std::vector<double> NumericalGradient(const std::function<double(const std::vector<double> &)> &f,
                                             std::vector<double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double fp = f(x);
    x[i] = keep - h;
    const double fm = f(x);
    x[i] = keep;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// ||a - b|| / max(||a||, ||b||); 0 when both vanish.
inline double RelativeError(const std::vector<double> &a, const std::vector<double> &b) {
  double d = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double den = std::sqrt(std::max(na, nb));
  return den == 0.0 ? 0.0 : std::sqrt(d) / den;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string &name) {
  auto p = std::filesystem::temp_directory_path() / ("rateinv-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
}  // namespace rateinv

#endif  // RATEINV_TESTS_TEST_UTIL_H_
