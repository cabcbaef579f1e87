// include/rateinv/model/network.h

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

#ifndef RATEINV_MODEL_NETWORK_H_
#define RATEINV_MODEL_NETWORK_H_

// Forward computation and analytic backward passes of the network pieces.
// Backward functions accumulate (+=) parameter gradients into `grad` when it
// is non-null and write input gradients into the given spans when they are
// non-empty.

#include <span>
#include <vector>

#include "rateinv/feat/feature-matrix.h"
#include "rateinv/model/params.h"

namespace rateinv {

void AffineForward(const Affine &a, std::span<const double> x, std::span<double> y);
void AffineBackward(const Affine &a, std::span<const double> x, std::span<const double> dy,
                    Affine *grad, std::span<double> dx);

// Concatenated per-channel mean and standard deviation over T frames of a
// T x C row-major matrix; std = sqrt(var + eps).
std::vector<double> StatsPool(std::span<const double> h, std::size_t frames,
                              std::size_t channels, double eps);
void StatsPoolBackward(std::span<const double> h, std::size_t frames, std::size_t channels,
                       std::span<const double> pooled, std::span<const double> dpooled,
                       std::span<double> dh);

struct EncoderCache {
  // acts[0] is the input; acts[l + 1] the ReLU output of TDNN layer l.
  std::vector<std::vector<double>> acts;
  std::vector<std::size_t> frames;
  std::vector<double> pooled;
};

// Frame-level TDNN -> statistics pooling -> affine projection to the
// embedding phi. Throws Error(kTooShort) when the input has fewer frames
// than the receptive field and kDimension on a feature-width mismatch.
std::vector<double> Encode(const ModelParams &params, const FeatureMatrix &features,
                           EncoderCache *cache = nullptr);
void EncodeBackward(const ModelParams &params, const EncoderCache &cache,
                    std::span<const double> dphi, ModelParams *grad);

struct Decomposition {
  std::vector<double> sigma;   // empty unless mode == kAttention
  std::vector<double> x_id, x_rate;
  std::vector<double> hidden;  // attention bottleneck pre-activation
};

// kAttention: sigma = m + (1 - 2m) * logistic(W2 relu(W1 phi + b1) + b2),
// x_id = (1 - sigma) * phi, x_rate = sigma * phi (m = config.sigma_margin).
Decomposition Decompose(const ModelParams &params, std::span<const double> phi);
void DecomposeBackward(const ModelParams &params, std::span<const double> phi,
                       const Decomposition &dec, std::span<const double> d_id,
                       std::span<const double> d_rate, ModelParams *grad,
                       std::span<double> dphi);

struct MappedPair {
  std::vector<double> id, rate;
};

// Independent affine map per branch; no normalization here.
MappedPair CosineMap(const ModelParams &params, std::span<const double> x_id,
                     std::span<const double> x_rate);
void CosineMapBackward(const ModelParams &params, std::span<const double> x_id,
                       std::span<const double> x_rate, std::span<const double> d_mapped_id,
                       std::span<const double> d_mapped_rate, ModelParams *grad,
                       std::span<double> d_id, std::span<double> d_rate);

// cos(theta_j) between normalized x_id and normalized id-head row j.
std::vector<double> IdCosines(const ModelParams &params, std::span<const double> x_id);
void IdCosinesBackward(const ModelParams &params, std::span<const double> x_id,
                       std::span<const double> dcos, ModelParams *grad,
                       std::span<double> d_id);

std::vector<double> RateLogits(const ModelParams &params, std::span<const double> x_rate);
void RateLogitsBackward(const ModelParams &params, std::span<const double> x_rate,
                        std::span<const double> dlogits, ModelParams *grad,
                        std::span<double> d_rate);

// Verification embedding: Decompose(Encode(features)).x_id.
std::vector<double> ExtractIdEmbedding(const ModelParams &params, const FeatureMatrix &features);

}  // namespace rateinv

#endif  // RATEINV_MODEL_NETWORK_H_
