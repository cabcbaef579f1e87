// include/rateinv/losses/losses.h

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

#ifndef RATEINV_LOSSES_LOSSES_H_
#define RATEINV_LOSSES_LOSSES_H_

// Training losses with analytic gradients. Every function returns the loss
// value and, when the gradient span is non-empty, writes (not accumulates)
// the gradient of the loss with respect to its vector input.

#include <span>
#include <vector>

namespace rateinv {

struct LossConfig {
  double lambda1 = 0.1;     // weight of the rate cross-entropy
  double lambda2 = 0.1;     // weight of the cosine adversarial loss
  double am_scale = 30.0;   // AM-Softmax s
  double am_margin = 0.2;   // AM-Softmax m
  double epsilon = 1e-8;    // norm floor
};

// Throws Error(kConfig) unless lambda1, lambda2 >= 0, s > 0, 0 <= m < 1,
// epsilon > 0.
void ValidateLossConfig(const LossConfig &cfg);

// y = x / max(||x||, eps). Returns the norm actually used.
double L2Normalize(std::span<const double> x, double eps, std::span<double> y);
// dx = d/dx of <dy, x / max(||x||, eps)>. Below the floor the map is a plain
// scaling by 1/eps.
void L2NormalizeBackward(std::span<const double> x, double eps,
                         std::span<const double> dy, std::span<double> dx);

// (u_hat . v_hat)^2 with u_hat = u / max(||u||, eps); always in [0, 1].
double CosineAdversarialLoss(std::span<const double> u, std::span<const double> v,
                             double eps, std::span<double> du = {},
                             std::span<double> dv = {});

// Additive-margin softmax over class cosines:
//   -log(e^{s(c_y - m)} / (e^{s(c_y - m)} + sum_{j != y} e^{s c_j}))
// computed with max subtraction.
double AmSoftmaxLoss(std::span<const double> cosines, int label, double scale,
                     double margin, std::span<double> dcosines = {});

// Softmax cross-entropy; rate labels index slow/normal/fast.
double SoftmaxCrossEntropy(std::span<const double> logits, int label,
                           std::span<double> dlogits = {});

inline double RateCrossEntropy(std::span<const double> logits, int label,
                               std::span<double> dlogits = {}) {
  return SoftmaxCrossEntropy(logits, label, dlogits);
}

// L = L_id + lambda1 * L_rate + lambda2 * L_cos
double TotalLoss(double l_id, double l_rate, double l_cos, const LossConfig &cfg);

}  // namespace rateinv

#endif  // RATEINV_LOSSES_LOSSES_H_
