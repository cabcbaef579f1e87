// src/losses/losses.cc

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

#include "rateinv/losses/losses.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rateinv/base/error.h"
#include "rateinv/kernels/kernels.h"

namespace rateinv {

void ValidateLossConfig(const LossConfig &cfg) {
  if (!(cfg.lambda1 >= 0.0) || !(cfg.lambda2 >= 0.0))
    Fail(ErrorKind::kConfig, "loss weights lambda1, lambda2 must be >= 0");
  if (!(cfg.am_scale > 0.0)) Fail(ErrorKind::kConfig, "AM-Softmax scale must be > 0");
  if (!(cfg.am_margin >= 0.0 && cfg.am_margin < 1.0))
    Fail(ErrorKind::kConfig, "AM-Softmax margin must be in [0, 1)");
  if (!(cfg.epsilon > 0.0)) Fail(ErrorKind::kConfig, "loss epsilon must be > 0");
}

double L2Normalize(std::span<const double> x, double eps, std::span<double> y) {
  const double norm = std::max(std::sqrt(kernels::Dot(x, x)), eps);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / norm;
  return norm;
}

void L2NormalizeBackward(std::span<const double> x, double eps,
                         std::span<const double> dy, std::span<double> dx) {
  const double raw = std::sqrt(kernels::Dot(x, x));
  if (raw <= eps) {
    for (std::size_t i = 0; i < x.size(); ++i) dx[i] = dy[i] / eps;
    return;
  }
  // (I - y y^T) dy / ||x||
  const double proj = kernels::Dot(x, dy) / (raw * raw);
  for (std::size_t i = 0; i < x.size(); ++i) dx[i] = (dy[i] - x[i] * proj) / raw;
}

double CosineAdversarialLoss(std::span<const double> u, std::span<const double> v,
                             double eps, std::span<double> du, std::span<double> dv) {
  if (u.size() != v.size()) Fail(ErrorKind::kDimension, "cosine loss inputs differ in length");
  std::vector<double> uh(u.size()), vh(v.size());
  L2Normalize(u, eps, uh);
  L2Normalize(v, eps, vh);
  // Rounding can push |c| a hair above 1 for parallel inputs.
  const double c = std::clamp(kernels::Dot(uh, vh), -1.0, 1.0);
  if (!du.empty() || !dv.empty()) {
    std::vector<double> g(u.size());
    if (!du.empty()) {
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = 2.0 * c * vh[i];
      L2NormalizeBackward(u, eps, g, du);
    }
    if (!dv.empty()) {
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = 2.0 * c * uh[i];
      L2NormalizeBackward(v, eps, g, dv);
    }
  }
  return c * c;
}

double SoftmaxCrossEntropy(std::span<const double> logits, int label,
                           std::span<double> dlogits) {
  if (label < 0 || static_cast<std::size_t>(label) >= logits.size())
    Fail(ErrorKind::kArgument, "class label " + std::to_string(label) + " out of range");
  const std::size_t top = static_cast<std::size_t>(
      std::max_element(logits.begin(), logits.end()) - logits.begin());
  const double mx = logits[top];
  // Sum over the non-maximal terms so that confident predictions keep full
  // relative precision through log1p.
  double rest = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j)
    if (j != top) rest += std::exp(logits[j] - mx);
  const double log_sum = std::log1p(rest);
  if (!dlogits.empty()) {
    for (std::size_t j = 0; j < logits.size(); ++j)
      dlogits[j] = std::exp(logits[j] - mx - log_sum);
    const auto y = static_cast<std::size_t>(label);
    dlogits[y] = y == top ? -rest / (1.0 + rest) : dlogits[y] - 1.0;
  }
  return (mx - logits[label]) + log_sum;
}

double AmSoftmaxLoss(std::span<const double> cosines, int label, double scale,
                     double margin, std::span<double> dcosines) {
  if (label < 0 || static_cast<std::size_t>(label) >= cosines.size())
    Fail(ErrorKind::kArgument, "speaker label " + std::to_string(label) + " out of range");
  std::vector<double> logits(cosines.size()), dlogits(dcosines.empty() ? 0 : cosines.size());
  for (std::size_t j = 0; j < cosines.size(); ++j)
    logits[j] = scale * (cosines[j] - (static_cast<int>(j) == label ? margin : 0.0));
  const double loss = SoftmaxCrossEntropy(logits, label, dlogits);
  if (!dcosines.empty())
    for (std::size_t j = 0; j < cosines.size(); ++j) dcosines[j] = scale * dlogits[j];
  return loss;
}

double TotalLoss(double l_id, double l_rate, double l_cos, const LossConfig &cfg) {
  return l_id + cfg.lambda1 * l_rate + cfg.lambda2 * l_cos;
}

}  // namespace rateinv
