// src/model/network.cc

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

#include "rateinv/model/network.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rateinv/base/error.h"
#include "rateinv/kernels/kernels.h"
#include "rateinv/losses/losses.h"

namespace rateinv {

void AffineForward(const Affine &a, std::span<const double> x, std::span<double> y) {
  kernels::MatVec(a.w, a.out, a.in, x, y);
  if (!a.b.empty())
    for (int i = 0; i < a.out; ++i) y[i] += a.b[i];
}

void AffineBackward(const Affine &a, std::span<const double> x, std::span<const double> dy,
                    Affine *grad, std::span<double> dx) {
  if (grad != nullptr) {
    kernels::RankOneAdd(1.0, dy, x, grad->w);
    if (!grad->b.empty())
      for (int i = 0; i < a.out; ++i) grad->b[i] += dy[i];
  }
  if (!dx.empty()) {
    std::fill(dx.begin(), dx.end(), 0.0);
    kernels::MatTransVecAdd(a.w, a.out, a.in, dy, dx);
  }
}

std::vector<double> StatsPool(std::span<const double> h, std::size_t frames,
                              std::size_t channels, double eps) {
  if (frames == 0 || h.size() != frames * channels)
    Fail(ErrorKind::kDimension, "statistics pooling input has wrong size");
  std::vector<double> out(2 * channels, 0.0);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t c = 0; c < channels; ++c) out[c] += h[t * channels + c];
  for (std::size_t c = 0; c < channels; ++c) out[c] /= static_cast<double>(frames);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t c = 0; c < channels; ++c) {
      const double d = h[t * channels + c] - out[c];
      out[channels + c] += d * d;
    }
  for (std::size_t c = 0; c < channels; ++c)
    out[channels + c] = std::sqrt(out[channels + c] / static_cast<double>(frames) + eps);
  return out;
}

void StatsPoolBackward(std::span<const double> h, std::size_t frames, std::size_t channels,
                       std::span<const double> pooled, std::span<const double> dpooled,
                       std::span<double> dh) {
  const double inv_t = 1.0 / static_cast<double>(frames);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t c = 0; c < channels; ++c) {
      const double centered = h[t * channels + c] - pooled[c];
      dh[t * channels + c] =
          inv_t * (dpooled[c] + dpooled[channels + c] * centered / pooled[channels + c]);
    }
}

std::vector<double> Encode(const ModelParams &params, const FeatureMatrix &features,
                           EncoderCache *cache) {
  const ModelConfig &cfg = params.config;
  if (static_cast<int>(features.NumCols()) != cfg.input_dim)
    Fail(ErrorKind::kDimension, "feature width " + std::to_string(features.NumCols()) +
                                    " != model input_dim " + std::to_string(cfg.input_dim));
  if (static_cast<int>(features.NumRows()) < cfg.ReceptiveField())
    Fail(ErrorKind::kTooShort, "utterance has " + std::to_string(features.NumRows()) +
                                   " frames; encoder needs " +
                                   std::to_string(cfg.ReceptiveField()));
  EncoderCache local;
  EncoderCache &c = cache != nullptr ? *cache : local;
  c.acts.assign(params.tdnn.size() + 1, {});
  c.frames.assign(params.tdnn.size() + 1, 0);
  c.acts[0].assign(features.Data().begin(), features.Data().end());
  c.frames[0] = features.NumRows();

  std::size_t in_ch = features.NumCols();
  std::vector<double> context;
  for (std::size_t l = 0; l < params.tdnn.size(); ++l) {
    const TdnnLayer &layer = params.tdnn[l];
    const Affine &a = layer.affine;
    const std::size_t t_in = c.frames[l];
    const std::size_t span = static_cast<std::size_t>((layer.kernel - 1) * layer.dilation);
    const std::size_t t_out = t_in - span;
    const auto &x = c.acts[l];
    auto &y = c.acts[l + 1];
    y.assign(t_out * a.out, 0.0);
    context.resize(static_cast<std::size_t>(a.in));
    for (std::size_t t = 0; t < t_out; ++t) {
      std::span<const double> ctx;
      if (layer.dilation == 1) {
        ctx = std::span<const double>(x).subspan(t * in_ch, a.in);
      } else {
        for (int j = 0; j < layer.kernel; ++j)
          std::copy_n(x.begin() + (t + j * layer.dilation) * in_ch, in_ch,
                      context.begin() + j * in_ch);
        ctx = context;
      }
      std::span<double> out(y.data() + t * a.out, a.out);
      AffineForward(a, ctx, out);
      for (double &v : out) v = std::max(v, 0.0);
    }
    c.frames[l + 1] = t_out;
    in_ch = a.out;
  }
  c.pooled = StatsPool(c.acts.back(), c.frames.back(), in_ch, cfg.pool_epsilon);
  std::vector<double> phi(params.pool_proj.out);
  AffineForward(params.pool_proj, c.pooled, phi);
  return phi;
}

void EncodeBackward(const ModelParams &params, const EncoderCache &cache,
                    std::span<const double> dphi, ModelParams *grad) {
  const std::size_t layers = params.tdnn.size();
  std::vector<double> dpooled(cache.pooled.size());
  AffineBackward(params.pool_proj, cache.pooled, dphi, grad ? &grad->pool_proj : nullptr,
                 dpooled);
  std::size_t ch = static_cast<std::size_t>(params.tdnn.back().affine.out);
  std::vector<double> dy(cache.acts.back().size());
  StatsPoolBackward(cache.acts.back(), cache.frames.back(), ch, cache.pooled, dpooled, dy);

  std::vector<double> dctx, dx;
  for (std::size_t l = layers; l-- > 0;) {
    const TdnnLayer &layer = params.tdnn[l];
    const Affine &a = layer.affine;
    const auto &x = cache.acts[l];
    const auto &y = cache.acts[l + 1];
    const std::size_t in_ch = l == 0 ? static_cast<std::size_t>(params.config.input_dim)
                                     : static_cast<std::size_t>(params.tdnn[l - 1].affine.out);
    const std::size_t t_out = cache.frames[l + 1];
    const bool need_dx = l > 0;
    if (need_dx) dx.assign(x.size(), 0.0);
    dctx.resize(a.in);
    std::vector<double> ctx(a.in);
    Affine *ga = grad ? &grad->tdnn[l].affine : nullptr;
    for (std::size_t t = 0; t < t_out; ++t) {
      double *dz = dy.data() + t * a.out;
      const double *yt = y.data() + t * a.out;
      bool any = false;
      for (int o = 0; o < a.out; ++o) {
        if (yt[o] <= 0.0) dz[o] = 0.0;
        any = any || dz[o] != 0.0;
      }
      if (!any) continue;
      for (int j = 0; j < layer.kernel; ++j)
        std::copy_n(x.begin() + (t + j * layer.dilation) * in_ch, in_ch,
                    ctx.begin() + j * in_ch);
      std::span<const double> dzs(dz, a.out);
      AffineBackward(a, ctx, dzs, ga, need_dx ? std::span<double>(dctx) : std::span<double>());
      if (need_dx)
        for (int j = 0; j < layer.kernel; ++j) {
          double *dst = dx.data() + (t + j * layer.dilation) * in_ch;
          const double *src = dctx.data() + j * in_ch;
          for (std::size_t k = 0; k < in_ch; ++k) dst[k] += src[k];
        }
    }
    if (need_dx) dy.swap(dx);
  }
}

Decomposition Decompose(const ModelParams &params, std::span<const double> phi) {
  const ModelConfig &cfg = params.config;
  const std::size_t d = phi.size();
  if (static_cast<int>(d) != cfg.embed_dim) Fail(ErrorKind::kDimension, "embedding size mismatch");
  Decomposition dec;
  switch (cfg.mode) {
    case DecompositionMode::kNone:
      dec.x_id.assign(phi.begin(), phi.end());
      dec.x_rate.assign(d, 0.0);
      break;
    case DecompositionMode::kParallelProjection:
      dec.x_id.resize(d);
      dec.x_rate.resize(d);
      AffineForward(params.branch_id, phi, dec.x_id);
      AffineForward(params.branch_rate, phi, dec.x_rate);
      break;
    case DecompositionMode::kAttention: {
      dec.hidden.resize(params.att_down.out);
      AffineForward(params.att_down, phi, dec.hidden);
      std::vector<double> act(dec.hidden.size());
      for (std::size_t i = 0; i < act.size(); ++i) act[i] = std::max(dec.hidden[i], 0.0);
      std::vector<double> z(d);
      AffineForward(params.att_up, act, z);
      dec.sigma.resize(d);
      dec.x_id.resize(d);
      dec.x_rate.resize(d);
      const double m = cfg.sigma_margin;
      for (std::size_t i = 0; i < d; ++i) {
        const double logistic = 1.0 / (1.0 + std::exp(-z[i]));
        dec.sigma[i] = m + (1.0 - 2.0 * m) * logistic;
        dec.x_rate[i] = dec.sigma[i] * phi[i];
        dec.x_id[i] = phi[i] - dec.x_rate[i];
      }
      break;
    }
  }
  return dec;
}

void DecomposeBackward(const ModelParams &params, std::span<const double> phi,
                       const Decomposition &dec, std::span<const double> d_id,
                       std::span<const double> d_rate, ModelParams *grad,
                       std::span<double> dphi) {
  const std::size_t d = phi.size();
  switch (params.config.mode) {
    case DecompositionMode::kNone:
      if (!dphi.empty()) std::copy(d_id.begin(), d_id.end(), dphi.begin());
      return;
    case DecompositionMode::kParallelProjection: {
      std::vector<double> tmp(dphi.empty() ? 0 : d);
      AffineBackward(params.branch_id, phi, d_id, grad ? &grad->branch_id : nullptr, dphi);
      AffineBackward(params.branch_rate, phi, d_rate, grad ? &grad->branch_rate : nullptr, tmp);
      if (!dphi.empty())
        for (std::size_t i = 0; i < d; ++i) dphi[i] += tmp[i];
      return;
    }
    case DecompositionMode::kAttention:
      break;
  }
  const double m = params.config.sigma_margin;
  std::vector<double> dz(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double ds = phi[i] * (d_rate[i] - d_id[i]);
    // sigma = m + (1 - 2m) L  =>  dsigma/dz = (1 - 2m) L (1 - L)
    const double logistic = (dec.sigma[i] - m) / (1.0 - 2.0 * m);
    dz[i] = ds * (1.0 - 2.0 * m) * logistic * (1.0 - logistic);
  }
  std::vector<double> act(dec.hidden.size()), dact(dec.hidden.size());
  for (std::size_t i = 0; i < act.size(); ++i) act[i] = std::max(dec.hidden[i], 0.0);
  AffineBackward(params.att_up, act, dz, grad ? &grad->att_up : nullptr, dact);
  for (std::size_t i = 0; i < dact.size(); ++i)
    if (dec.hidden[i] <= 0.0) dact[i] = 0.0;
  std::vector<double> dphi_att(dphi.empty() ? 0 : d);
  AffineBackward(params.att_down, phi, dact, grad ? &grad->att_down : nullptr, dphi_att);
  if (!dphi.empty())
    for (std::size_t i = 0; i < d; ++i)
      dphi[i] = (1.0 - dec.sigma[i]) * d_id[i] + dec.sigma[i] * d_rate[i] + dphi_att[i];
}

MappedPair CosineMap(const ModelParams &params, std::span<const double> x_id,
                     std::span<const double> x_rate) {
  MappedPair out;
  out.id.resize(params.cos_id.out);
  out.rate.resize(params.cos_rate.out);
  AffineForward(params.cos_id, x_id, out.id);
  AffineForward(params.cos_rate, x_rate, out.rate);
  return out;
}

void CosineMapBackward(const ModelParams &params, std::span<const double> x_id,
                       std::span<const double> x_rate, std::span<const double> d_mapped_id,
                       std::span<const double> d_mapped_rate, ModelParams *grad,
                       std::span<double> d_id, std::span<double> d_rate) {
  AffineBackward(params.cos_id, x_id, d_mapped_id, grad ? &grad->cos_id : nullptr, d_id);
  AffineBackward(params.cos_rate, x_rate, d_mapped_rate, grad ? &grad->cos_rate : nullptr,
                 d_rate);
}

std::vector<double> IdCosines(const ModelParams &params, std::span<const double> x_id) {
  const Affine &h = params.id_head;
  const double eps = params.config.norm_epsilon;
  std::vector<double> xn(x_id.size()), wn(h.in), cos(h.out);
  L2Normalize(x_id, eps, xn);
  for (int j = 0; j < h.out; ++j) {
    std::span<const double> row(h.w.data() + static_cast<std::size_t>(j) * h.in, h.in);
    L2Normalize(row, eps, wn);
    cos[j] = std::clamp(kernels::Dot(xn, wn), -1.0, 1.0);
  }
  return cos;
}

void IdCosinesBackward(const ModelParams &params, std::span<const double> x_id,
                       std::span<const double> dcos, ModelParams *grad,
                       std::span<double> d_id) {
  const Affine &h = params.id_head;
  const double eps = params.config.norm_epsilon;
  std::vector<double> xn(x_id.size()), wn(h.in), dxn(x_id.size(), 0.0), dwn(h.in),
      dw(h.in);
  L2Normalize(x_id, eps, xn);
  for (int j = 0; j < h.out; ++j) {
    if (dcos[j] == 0.0) continue;
    std::span<const double> row(h.w.data() + static_cast<std::size_t>(j) * h.in, h.in);
    L2Normalize(row, eps, wn);
    kernels::Axpy(dcos[j], wn, dxn);
    if (grad != nullptr) {
      for (int k = 0; k < h.in; ++k) dwn[k] = dcos[j] * xn[k];
      L2NormalizeBackward(row, eps, dwn, dw);
      kernels::Axpy(1.0, dw,
                    std::span<double>(grad->id_head.w.data() + static_cast<std::size_t>(j) * h.in, h.in));
    }
  }
  if (!d_id.empty()) L2NormalizeBackward(x_id, eps, dxn, d_id);
}

std::vector<double> RateLogits(const ModelParams &params, std::span<const double> x_rate) {
  std::vector<double> logits(params.rate_head.out);
  AffineForward(params.rate_head, x_rate, logits);
  return logits;
}

void RateLogitsBackward(const ModelParams &params, std::span<const double> x_rate,
                        std::span<const double> dlogits, ModelParams *grad,
                        std::span<double> d_rate) {
  AffineBackward(params.rate_head, x_rate, dlogits, grad ? &grad->rate_head : nullptr, d_rate);
}

std::vector<double> ExtractIdEmbedding(const ModelParams &params, const FeatureMatrix &features) {
  const auto phi = Encode(params, features);
  return Decompose(params, phi).x_id;
}

}  // namespace rateinv
