// src/trainer/trainer.cc

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

#include "rateinv/trainer/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <set>
#include <thread>

#include "rateinv/base/error.h"
#include "rateinv/base/log.h"
#include "rateinv/model/checkpoint.h"
#include "rateinv/model/network.h"

namespace rateinv {

TrainingSet BuildTrainingSet(const std::vector<UtteranceRecord> &manifest,
                             const std::map<std::string, FeatureMatrix> &features,
                             int min_frames) {
  TrainingSet set;
  std::set<std::string> speakers;
  for (const auto &r : manifest) speakers.insert(r.speaker_id);
  set.speakers.assign(speakers.begin(), speakers.end());
  for (const auto &r : manifest) {
    auto it = features.find(r.utt_id);
    if (it == features.end()) {
      RATEINV_WARN("no features for {}; skipped", r.utt_id);
      continue;
    }
    if (static_cast<int>(it->second.NumRows()) < min_frames) {
      RATEINV_WARN("{} has {} frames (< {}); skipped", r.utt_id, it->second.NumRows(),
                   min_frames);
      continue;
    }
    const auto pos = std::lower_bound(set.speakers.begin(), set.speakers.end(), r.speaker_id);
    set.utterances.push_back({r.utt_id, it->second,
                              static_cast<int>(pos - set.speakers.begin()),
                              static_cast<int>(r.rate_label)});
  }
  return set;
}

GroupMask PhaseMask(Phase phase) {
  return phase == Phase::kMaximize ? GroupMask::Only(ParamGroup::kCosineMap)
                                   : GroupMask::AllBut(ParamGroup::kCosineMap);
}

namespace {

struct ExampleLosses {
  double l_id = 0, l_rate = 0, l_cos = 0;
};

// Losses of one example; accumulates the gradient of the phase objective
// into *grad (which must be zero on entry) when grad is non-null.
ExampleLosses ExampleObjective(const ModelParams &params, const TrainExample &ex,
                               const LossConfig &loss, Phase phase, ModelParams *grad) {
  const ModelConfig &cfg = params.config;
  if (ex.speaker < 0 || ex.speaker >= cfg.num_speakers || ex.rate < 0 || ex.rate >= cfg.num_rates)
    Fail(ErrorKind::kArgument, "example label out of range");
  const std::size_t d = cfg.embed_dim, dc = cfg.cos_dim;
  const bool backward = grad != nullptr;
  const bool full_backward = backward && phase == Phase::kMinimize;

  EncoderCache cache;
  const auto phi = Encode(params, ex.features, full_backward ? &cache : nullptr);
  const Decomposition dec = Decompose(params, phi);

  ExampleLosses out;
  const auto cosines = IdCosines(params, dec.x_id);
  std::vector<double> dcos(full_backward ? cosines.size() : 0);
  out.l_id = AmSoftmaxLoss(cosines, ex.speaker, loss.am_scale, loss.am_margin, dcos);

  const auto logits = RateLogits(params, dec.x_rate);
  std::vector<double> dlogits(full_backward ? logits.size() : 0);
  out.l_rate = RateCrossEntropy(logits, ex.rate, dlogits);

  const MappedPair mapped = CosineMap(params, dec.x_id, dec.x_rate);
  std::vector<double> du(backward ? dc : 0), dv(backward ? dc : 0);
  out.l_cos = CosineAdversarialLoss(mapped.id, mapped.rate, loss.epsilon, du, dv);

  if (!backward) return out;

  if (phase == Phase::kMaximize) {
    for (auto &g : du) g = -g;
    for (auto &g : dv) g = -g;
    CosineMapBackward(params, dec.x_id, dec.x_rate, du, dv, grad, {}, {});
    return out;
  }

  std::vector<double> d_id(d, 0.0), d_rate(d, 0.0), tmp(d);
  IdCosinesBackward(params, dec.x_id, dcos, grad, d_id);
  if (loss.lambda1 != 0.0) {
    for (auto &g : dlogits) g *= loss.lambda1;
    RateLogitsBackward(params, dec.x_rate, dlogits, grad, tmp);
    for (std::size_t i = 0; i < d; ++i) d_rate[i] += tmp[i];
  }
  if (loss.lambda2 != 0.0) {
    for (auto &g : du) g *= loss.lambda2;
    for (auto &g : dv) g *= loss.lambda2;
    // The cosine map is frozen in this phase: gradients pass through its
    // weights but are not accumulated for them.
    std::vector<double> dcid(d), dcrate(d);
    CosineMapBackward(params, dec.x_id, dec.x_rate, du, dv, nullptr, dcid, dcrate);
    for (std::size_t i = 0; i < d; ++i) {
      d_id[i] += dcid[i];
      d_rate[i] += dcrate[i];
    }
  }
  std::vector<double> dphi(d);
  DecomposeBackward(params, phi, dec, d_id, d_rate, grad, dphi);
  EncodeBackward(params, cache, dphi, grad);
  return out;
}

void AddInto(const ModelParams &src, ModelParams *dst) {
  auto s = src.Tensors();
  auto t = dst->Tensors();
  for (std::size_t k = 0; k < s.size(); ++k)
    for (std::size_t i = 0; i < s[k].data.size(); ++i) t[k].data[i] += s[k].data[i];
}

void Scale(double c, ModelParams *p) {
  for (auto &t : p->Tensors())
    for (auto &v : t.data) v *= c;
}

}  // namespace

StepMetrics EvaluateBatch(const ModelParams &params, const std::vector<TrainExample> &batch,
                          const LossConfig &loss, Phase phase, ModelParams *grad,
                          int num_threads) {
  if (batch.empty()) Fail(ErrorKind::kArgument, "empty batch");
  ValidateLossConfig(loss);
  const std::size_t n = batch.size();
  std::vector<ExampleLosses> losses(n);
  std::vector<ModelParams> grads(grad != nullptr ? n : 0);

  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n; i += stride) {
      ModelParams *g = nullptr;
      if (grad != nullptr) {
        grads[i] = ZeroParams(params.config);
        g = &grads[i];
      }
      losses[i] = ExampleObjective(params, batch[i], loss, phase, g);
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, num_threads)));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          work(t, threads);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto &th : pool) th.join();
    for (auto &e : errors)
      if (e) std::rethrow_exception(e);
  }

  StepMetrics m;
  m.phase = phase;
  for (const auto &l : losses) {
    m.l_id += l.l_id;
    m.l_rate += l.l_rate;
    m.l_cos += l.l_cos;
  }
  const double inv = 1.0 / static_cast<double>(n);
  m.l_id *= inv;
  m.l_rate *= inv;
  m.l_cos *= inv;
  m.total = TotalLoss(m.l_id, m.l_rate, m.l_cos, loss);
  if (grad != nullptr) {
    *grad = std::move(grads[0]);
    for (std::size_t i = 1; i < n; ++i) AddInto(grads[i], grad);
    Scale(inv, grad);
  }
  return m;
}

SgdOptimizer::SgdOptimizer(const ModelParams &shape,
                           const std::array<double, kNumParamGroups> &lr, double momentum)
    : lr_(lr), momentum_(momentum), velocity_(ZeroParams(shape.config)) {
  for (double v : lr_)
    if (!(v >= 0.0) || !std::isfinite(v))
      Fail(ErrorKind::kConfig, "learning rates must be finite and >= 0");
  if (!(momentum_ >= 0.0 && momentum_ < 1.0))
    Fail(ErrorKind::kConfig, "momentum must lie in [0, 1)");
}

void SgdOptimizer::Apply(const ModelParams &grad, const GroupMask &mask, ModelParams *params) {
  auto p = params->Tensors();
  auto g = grad.Tensors();
  auto v = velocity_.Tensors();
  if (p.size() != g.size() || p.size() != v.size())
    Fail(ErrorKind::kDimension, "optimizer: parameter layout mismatch");
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!mask[p[k].group]) continue;
    const double lr = lr_[static_cast<int>(p[k].group)];
    for (std::size_t i = 0; i < p[k].data.size(); ++i) {
      v[k].data[i] = momentum_ * v[k].data[i] + g[k].data[i];
      p[k].data[i] -= lr * v[k].data[i];
    }
  }
  if (mask[ParamGroup::kIdHead]) RenormalizeIdHead(params);
  ++step_;
}

namespace {

StepMetrics TrainStep(const std::vector<TrainExample> &batch, const LossConfig &loss,
                      Phase phase, ModelParams *params, SgdOptimizer *opt, int num_threads) {
  ModelParams grad;
  StepMetrics m = EvaluateBatch(*params, batch, loss, phase, &grad, num_threads);
  m.step = opt->step();
  if (std::isfinite(m.total)) opt->Apply(grad, PhaseMask(phase), params);
  return m;
}

}  // namespace

StepMetrics TrainStepMax(const std::vector<TrainExample> &batch, const LossConfig &loss,
                         ModelParams *params, SgdOptimizer *opt, int num_threads) {
  return TrainStep(batch, loss, Phase::kMaximize, params, opt, num_threads);
}

StepMetrics TrainStepMin(const std::vector<TrainExample> &batch, const LossConfig &loss,
                         ModelParams *params, SgdOptimizer *opt, int num_threads) {
  return TrainStep(batch, loss, Phase::kMinimize, params, opt, num_threads);
}

AdversarialSchedule MakeSchedule(const TrainerOptions &opts) {
  return AdversarialSchedule(opts.max_phase_iters, opts.min_phase_iters,
                             opts.loss.lambda2 > 0.0);
}

std::string FormatMetrics(const StepMetrics &m) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%ld %s %.6f %.6f %.6f %.6f", m.step, PhaseName(m.phase),
                m.l_id, m.l_rate, m.l_cos, m.total);
  return buf;
}

namespace {

TrainExample SampleChunk(const TrainingUtterance &u, int chunk_frames, std::mt19937_64 *rng) {
  TrainExample ex;
  ex.speaker = u.speaker;
  ex.rate = u.rate;
  const std::size_t t = u.features.NumRows();
  const std::size_t len = static_cast<std::size_t>(chunk_frames);
  if (t <= len) {
    ex.features = u.features;
  } else {
    std::uniform_int_distribution<std::size_t> start(0, t - len);
    ex.features = u.features.RowRange(start(*rng), len);
  }
  return ex;
}

void SaveParams(const std::string &path, const ModelParams &params, const SgdOptimizer &opt,
                uint64_t seed) {
  if (path.empty()) return;
  Checkpoint ckpt;
  ckpt.params = params;
  ckpt.meta["step"] = std::to_string(opt.step());
  ckpt.meta["seed"] = std::to_string(seed);
  for (const auto &t : opt.momentum_buffers().Tensors())
    ckpt.extra["momentum/" + t.name].assign(t.data.begin(), t.data.end());
  WriteCheckpoint(path, ckpt);
}

// Copies every tensor whose shape matches.
void WarmStart(const ModelParams &src, ModelParams *dst) {
  auto s = src.Tensors();
  auto d = dst->Tensors();
  for (auto &t : d) {
    auto it = std::find_if(s.begin(), s.end(), [&](const auto &x) { return x.name == t.name; });
    if (it == s.end() || it->shape != t.shape) {
      RATEINV_LOG("warm start: {} re-initialized", t.name);
      continue;
    }
    std::copy(it->data.begin(), it->data.end(), t.data.begin());
  }
}

}  // namespace

TrainResult RunTraining(const TrainingSet &data, const TrainerOptions &opts, uint64_t seed,
                        std::ostream *log, const std::string &checkpoint_path,
                        const ModelParams *init) {
  ValidateLossConfig(opts.loss);
  if (opts.batch_size <= 0 || opts.steps < 0 || opts.probe_batch < 0)
    Fail(ErrorKind::kConfig, "batch_size, steps and probe_batch must be positive");
  ModelConfig cfg = opts.model;
  cfg.num_speakers = static_cast<int>(data.speakers.size());
  if (cfg.num_speakers < 2)
    Fail(ErrorKind::kConfig, "training needs at least 2 speakers, got " +
                                 std::to_string(cfg.num_speakers));
  ValidateModelConfig(cfg);
  if (opts.chunk_frames < cfg.ReceptiveField())
    Fail(ErrorKind::kConfig, "chunk_frames must be at least the receptive field (" +
                                 std::to_string(cfg.ReceptiveField()) + ")");
  if (data.utterances.empty()) Fail(ErrorKind::kConfig, "training set is empty");
  if (opts.check_rate_classes && opts.loss.lambda1 > 0.0) {
    std::array<int, kNumRateLabels> count{};
    for (const auto &u : data.utterances) ++count[u.rate];
    for (int r = 0; r < kNumRateLabels; ++r)
      if (count[r] == 0)
        Fail(ErrorKind::kConfig,
             std::string("rate class '") + RateLabelName(static_cast<RateLabel>(r)) +
                 "' has no training utterances; the rate head needs all three classes "
                 "(add augmentation or set lambda1 = 0)");
  }

  TrainResult result;
  result.params = InitParams(cfg, seed);
  if (init != nullptr) {
    WarmStart(*init, &result.params);
    RenormalizeIdHead(&result.params);
  }
  ModelParams &params = result.params;
  SgdOptimizer opt(params, opts.learning_rates, opts.momentum);
  const AdversarialSchedule schedule = MakeSchedule(opts);

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<std::size_t> pick(0, data.utterances.size() - 1);

  // Fixed evaluation batch: one chunk each from a seeded utterance subset.
  std::vector<TrainExample> probe;
  {
    std::mt19937_64 probe_rng(seed + 1);
    for (int i = 0; i < opts.probe_batch; ++i)
      probe.push_back(SampleChunk(data.utterances[pick(probe_rng)], opts.chunk_frames, &probe_rng));
  }
  auto probe_eval = [&](long step) {
    StepMetrics m = EvaluateBatch(params, probe, opts.loss, schedule.PhaseAt(step), nullptr,
                                  opts.num_threads);
    m.step = step;
    return m;
  };

  ModelParams last_good = params;
  std::optional<PhaseProbe> open;
  for (long step = 0; step < opts.steps; ++step) {
    const Phase phase = schedule.PhaseAt(step);
    if (!probe.empty() && schedule.adversarial() && schedule.IsPhaseStart(step)) {
      const StepMetrics now = probe_eval(step);
      if (open) {
        open->end_step = step;
        open->end = now;
        open->end.phase = open->phase;
        result.probes.push_back(*open);
      }
      open = PhaseProbe{phase, step, step, now, now};
    }
    std::vector<TrainExample> batch;
    batch.reserve(opts.batch_size);
    for (int i = 0; i < opts.batch_size; ++i)
      batch.push_back(SampleChunk(data.utterances[pick(rng)], opts.chunk_frames, &rng));

    StepMetrics m = phase == Phase::kMaximize
                        ? TrainStepMax(batch, opts.loss, &params, &opt, opts.num_threads)
                        : TrainStepMin(batch, opts.loss, &params, &opt, opts.num_threads);
    m.step = step;
    result.log.push_back(m);
    if (log != nullptr) *log << FormatMetrics(m) << '\n';
    if (!std::isfinite(m.total)) {
      params = last_good;
      SaveParams(checkpoint_path, params, opt, seed);
      Fail(ErrorKind::kNumerical, "non-finite loss at step " + std::to_string(step) +
                                      (checkpoint_path.empty()
                                           ? std::string()
                                           : "; last good parameters saved to " + checkpoint_path));
    }
    last_good = params;
    if (opts.checkpoint_every > 0 && (step + 1) % opts.checkpoint_every == 0)
      SaveParams(checkpoint_path, params, opt, seed);
  }
  if (open) {
    open->end_step = opts.steps;
    open->end = probe_eval(opts.steps - 1);
    open->end.phase = open->phase;
    result.probes.push_back(*open);
  }
  SaveParams(checkpoint_path, params, opt, seed);
  return result;
}

Accuracy EvaluateAccuracy(const ModelParams &params, const TrainingSet &data) {
  Accuracy acc;
  if (data.utterances.empty()) return acc;
  for (const auto &u : data.utterances) {
    const auto phi = Encode(params, u.features);
    const Decomposition dec = Decompose(params, phi);
    const auto cos = IdCosines(params, dec.x_id);
    const auto logits = RateLogits(params, dec.x_rate);
    acc.id += (std::max_element(cos.begin(), cos.end()) - cos.begin()) == u.speaker;
    acc.rate += (std::max_element(logits.begin(), logits.end()) - logits.begin()) == u.rate;
  }
  acc.id /= static_cast<double>(data.utterances.size());
  acc.rate /= static_cast<double>(data.utterances.size());
  return acc;
}

}  // namespace rateinv
