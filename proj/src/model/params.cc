// src/model/params.cc

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

#include "rateinv/model/params.h"

#include <cmath>
#include <random>

#include "rateinv/base/error.h"

namespace rateinv {

const char *ParamGroupName(ParamGroup g) {
  switch (g) {
    case ParamGroup::kEncoder: return "encoder";
    case ParamGroup::kAttention: return "attention";
    case ParamGroup::kIdHead: return "id_head";
    case ParamGroup::kRateHead: return "rate_head";
    case ParamGroup::kCosineMap: return "cosine_map";
  }
  return "?";
}

const char *DecompositionModeName(DecompositionMode m) {
  switch (m) {
    case DecompositionMode::kNone: return "none";
    case DecompositionMode::kAttention: return "attention";
    case DecompositionMode::kParallelProjection: return "parallel";
  }
  return "?";
}

DecompositionMode ParseDecompositionMode(const std::string &name) {
  if (name == "none") return DecompositionMode::kNone;
  if (name == "attention") return DecompositionMode::kAttention;
  if (name == "parallel") return DecompositionMode::kParallelProjection;
  Fail(ErrorKind::kConfig, "unknown decomposition mode '" + name + "'");
}

int ModelConfig::ReceptiveField() const {
  int rf = 1;
  for (std::size_t i = 0; i < kernel_sizes.size(); ++i)
    rf += (kernel_sizes[i] - 1) * dilations[i];
  return rf;
}

void ValidateModelConfig(const ModelConfig &cfg) {
  auto bad = [](const std::string &why) { Fail(ErrorKind::kConfig, "model: " + why); };
  if (cfg.input_dim <= 0 || cfg.channels <= 0 || cfg.embed_dim <= 0 || cfg.cos_dim <= 0)
    bad("dimensions must be positive");
  if (cfg.kernel_sizes.empty() || cfg.kernel_sizes.size() != cfg.dilations.size())
    bad("kernel_sizes and dilations must be non-empty and equally long");
  for (std::size_t i = 0; i < cfg.kernel_sizes.size(); ++i)
    if (cfg.kernel_sizes[i] <= 0 || cfg.dilations[i] <= 0) bad("kernel and dilation must be positive");
  if (cfg.attention_ratio <= 0 || cfg.embed_dim % cfg.attention_ratio != 0)
    bad("embed_dim must be divisible by attention_ratio");
  if (cfg.num_speakers < 2) bad("need at least two speaker classes");
  if (cfg.num_rates <= 0) bad("num_rates must be positive");
  if (!(cfg.pool_epsilon > 0) || !(cfg.norm_epsilon > 0)) bad("epsilons must be positive");
  if (!(cfg.sigma_margin >= 0 && cfg.sigma_margin < 0.5)) bad("sigma_margin must be in [0, 0.5)");
}

namespace {

template <class View, class P>
std::vector<View> ListTensors(P &p) {
  std::vector<View> out;
  auto add_affine = [&](const std::string &name, ParamGroup g, auto &a, bool with_bias) {
    if (a.Empty()) return;
    out.push_back({name + ".w", g, {a.out, a.in}, a.w});
    if (with_bias) out.push_back({name + ".b", g, {a.out}, a.b});
  };
  for (std::size_t i = 0; i < p.tdnn.size(); ++i)
    add_affine("tdnn" + std::to_string(i), ParamGroup::kEncoder, p.tdnn[i].affine, true);
  add_affine("pool_proj", ParamGroup::kEncoder, p.pool_proj, true);
  add_affine("att_down", ParamGroup::kAttention, p.att_down, true);
  add_affine("att_up", ParamGroup::kAttention, p.att_up, true);
  add_affine("branch_id", ParamGroup::kAttention, p.branch_id, true);
  add_affine("branch_rate", ParamGroup::kAttention, p.branch_rate, true);
  add_affine("id_head", ParamGroup::kIdHead, p.id_head, false);
  add_affine("rate_head", ParamGroup::kRateHead, p.rate_head, true);
  add_affine("cos_id", ParamGroup::kCosineMap, p.cos_id, true);
  add_affine("cos_rate", ParamGroup::kCosineMap, p.cos_rate, true);
  return out;
}

}  // namespace

std::vector<TensorView> ModelParams::Tensors() { return ListTensors<TensorView>(*this); }

std::vector<ConstTensorView> ModelParams::Tensors() const {
  return ListTensors<ConstTensorView>(*this);
}

std::size_t ModelParams::NumParameters() const {
  std::size_t n = 0;
  for (const auto &t : Tensors()) n += t.data.size();
  return n;
}

bool ModelParams::operator==(const ModelParams &o) const {
  return tdnn == o.tdnn && pool_proj == o.pool_proj && att_down == o.att_down &&
         att_up == o.att_up && branch_id == o.branch_id && branch_rate == o.branch_rate &&
         id_head == o.id_head && rate_head == o.rate_head && cos_id == o.cos_id &&
         cos_rate == o.cos_rate;
}

ModelParams ZeroParams(const ModelConfig &cfg) {
  ValidateModelConfig(cfg);
  ModelParams p;
  p.config = cfg;
  int in = cfg.input_dim;
  for (std::size_t i = 0; i < cfg.kernel_sizes.size(); ++i) {
    TdnnLayer layer;
    layer.kernel = cfg.kernel_sizes[i];
    layer.dilation = cfg.dilations[i];
    layer.affine = Affine(cfg.channels, layer.kernel * in);
    p.tdnn.push_back(std::move(layer));
    in = cfg.channels;
  }
  p.pool_proj = Affine(cfg.embed_dim, 2 * cfg.channels);
  if (cfg.mode == DecompositionMode::kAttention) {
    p.att_down = Affine(cfg.AttentionHidden(), cfg.embed_dim);
    p.att_up = Affine(cfg.embed_dim, cfg.AttentionHidden());
  } else if (cfg.mode == DecompositionMode::kParallelProjection) {
    p.branch_id = Affine(cfg.embed_dim, cfg.embed_dim);
    p.branch_rate = Affine(cfg.embed_dim, cfg.embed_dim);
  }
  p.id_head = Affine(cfg.num_speakers, cfg.embed_dim);
  p.id_head.b.clear();
  p.rate_head = Affine(cfg.num_rates, cfg.embed_dim);
  p.cos_id = Affine(cfg.cos_dim, cfg.embed_dim);
  p.cos_rate = Affine(cfg.cos_dim, cfg.embed_dim);
  return p;
}

ModelParams InitParams(const ModelConfig &cfg, uint64_t seed) {
  ModelParams p = ZeroParams(cfg);
  std::mt19937_64 rng(seed);
  auto fill = [&](Affine &a, double gain) {
    const double bound = gain * std::sqrt(3.0 / a.in);
    std::uniform_real_distribution<double> u(-bound, bound);
    for (double &w : a.w) w = u(rng);
  };
  const double relu_gain = std::sqrt(2.0);
  for (auto &layer : p.tdnn) fill(layer.affine, relu_gain);
  fill(p.pool_proj, 1.0);
  if (!p.att_down.Empty()) {
    fill(p.att_down, relu_gain);
    fill(p.att_up, 1.0);
  }
  if (!p.branch_id.Empty()) {
    fill(p.branch_id, 1.0);
    fill(p.branch_rate, 1.0);
  }
  fill(p.id_head, 1.0);
  RenormalizeIdHead(&p);
  fill(p.rate_head, 1.0);
  fill(p.cos_id, 1.0);
  fill(p.cos_rate, 1.0);
  return p;
}

void RenormalizeIdHead(ModelParams *params) {
  Affine &h = params->id_head;
  for (int r = 0; r < h.out; ++r) {
    double *row = h.w.data() + static_cast<std::size_t>(r) * h.in;
    double norm = 0.0;
    for (int c = 0; c < h.in; ++c) norm += row[c] * row[c];
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (int c = 0; c < h.in; ++c) row[c] /= norm;
  }
}

void ZeroGroups(ModelParams *params, const GroupMask &mask) {
  for (auto &t : params->Tensors())
    if (mask[t.group]) std::fill(t.data.begin(), t.data.end(), 0.0);
}

}  // namespace rateinv
