// include/rateinv/model/params.h

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

#ifndef RATEINV_MODEL_PARAMS_H_
#define RATEINV_MODEL_PARAMS_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rateinv {

// Parameter groups that the adversarial schedule freezes and unfreezes.
enum class ParamGroup { kEncoder = 0, kAttention, kIdHead, kRateHead, kCosineMap };
constexpr int kNumParamGroups = 5;
const char *ParamGroupName(ParamGroup g);

// Which groups a step may modify.
struct GroupMask {
  std::array<bool, kNumParamGroups> on{};
  bool operator[](ParamGroup g) const { return on[static_cast<int>(g)]; }
  bool &operator[](ParamGroup g) { return on[static_cast<int>(g)]; }
  static GroupMask Only(ParamGroup g) {
    GroupMask m;
    m[g] = true;
    return m;
  }
  static GroupMask AllBut(ParamGroup g) {
    GroupMask m;
    m.on.fill(true);
    m[g] = false;
    return m;
  }
};

// How the pooled embedding is split into identity and rate parts.
enum class DecompositionMode {
  kNone,                // x_id = phi, x_rate = 0 (plain x-vector baseline)
  kAttention,           // channel gate: x_id = (1 - s) * phi, x_rate = s * phi
  kParallelProjection,  // two independent affine maps of phi
};
const char *DecompositionModeName(DecompositionMode m);
DecompositionMode ParseDecompositionMode(const std::string &name);

struct ModelConfig {
  int input_dim = 40;
  std::vector<int> kernel_sizes{5, 3, 3};
  std::vector<int> dilations{1, 2, 3};
  int channels = 64;
  int embed_dim = 128;
  int attention_ratio = 4;
  int cos_dim = 64;
  int num_speakers = 2;
  int num_rates = 3;
  DecompositionMode mode = DecompositionMode::kAttention;
  double pool_epsilon = 1e-5;     // std = sqrt(var + pool_epsilon)
  double sigma_margin = 1e-6;     // gate lies in [margin, 1 - margin]
  double norm_epsilon = 1e-8;     // id-head cosine normalization floor

  int ReceptiveField() const;
  int AttentionHidden() const { return embed_dim / attention_ratio; }
};

// Throws Error(kConfig) on inconsistent dimensions.
void ValidateModelConfig(const ModelConfig &cfg);

// y = w x + b with w row-major (out x in).
struct Affine {
  int out = 0, in = 0;
  std::vector<double> w, b;
  Affine() = default;
  Affine(int out_dim, int in_dim) : out(out_dim), in(in_dim), w(out_dim * in_dim, 0.0), b(out_dim, 0.0) {}
  bool Empty() const { return out == 0; }
  bool operator==(const Affine &) const = default;
};

// Dilated temporal convolution; the affine input is the concatenation of
// `kernel` frames spaced by `dilation`.
struct TdnnLayer {
  int kernel = 1, dilation = 1;
  Affine affine;  // out x (kernel * in_channels)
  bool operator==(const TdnnLayer &) const = default;
};

struct TensorView {
  std::string name;
  ParamGroup group;
  std::vector<int> shape;
  std::span<double> data;
};

struct ConstTensorView {
  std::string name;
  ParamGroup group;
  std::vector<int> shape;
  std::span<const double> data;
};

struct ModelParams {
  ModelConfig config;
  std::vector<TdnnLayer> tdnn;  // encoder
  Affine pool_proj;             // encoder: 2 * channels -> embed_dim
  Affine att_down, att_up;      // attention (kAttention)
  Affine branch_id, branch_rate;  // attention (kParallelProjection)
  Affine id_head;               // num_speakers x embed_dim, rows unit norm, b unused
  Affine rate_head;             // embed_dim -> num_rates
  Affine cos_id, cos_rate;      // cosine mapping block: embed_dim -> cos_dim

  std::vector<TensorView> Tensors();
  std::vector<ConstTensorView> Tensors() const;
  std::size_t NumParameters() const;
  bool operator==(const ModelParams &other) const;
};

// Shapes from config, all values zero.
ModelParams ZeroParams(const ModelConfig &cfg);

// Uniform(-a, a) weights with a = gain * sqrt(3 / fan_in) (gain sqrt(2)
// ahead of a ReLU), zero biases, unit-norm id-head rows. Deterministic in
// seed.
ModelParams InitParams(const ModelConfig &cfg, uint64_t seed);

// Restores the unit-norm invariant of the id-head rows.
void RenormalizeIdHead(ModelParams *params);

// Sets every entry of the listed groups to zero (gradient buffers).
void ZeroGroups(ModelParams *params, const GroupMask &mask);

}  // namespace rateinv

#endif  // RATEINV_MODEL_PARAMS_H_
