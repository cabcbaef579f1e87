// src/pipeline/config.cc

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

#include "rateinv/pipeline/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "rateinv/base/error.h"
#include "rateinv/tsm/augment.h"

namespace rateinv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Field {
  std::string section;  // "" for top-level keys
  std::string key;
  // Reads `node` into cfg; `where` prefixes error messages.
  std::function<void(ExperimentConfig &, const YAML::Node &, const std::string &)> set;
  std::function<YAML::Node(const ExperimentConfig &)> get;
};

template <typename T>
using Access = std::function<T &(ExperimentConfig &)>;

[[noreturn]] void Bad(const std::string &where, const std::string &what) {
  Fail(ErrorKind::kConfig, where + ": " + what);
}

template <typename T>
T Scalar(const YAML::Node &node, const std::string &where, const char *type) {
  if (!node.IsScalar()) Bad(where, std::string("expected ") + type);
  try {
    return node.as<T>();
  } catch (const YAML::Exception &) {
    Bad(where, std::string("expected ") + type + ", got '" + node.Scalar() + "'");
  }
}

Field IntField(std::string section, std::string key, Access<int> acc, int lo, int hi) {
  return {section, key,
          [=](ExperimentConfig &c, const YAML::Node &n, const std::string &where) {
            const long v = Scalar<long>(n, where, "an integer");
            if (v < lo || v > hi)
              Bad(where, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            acc(c) = static_cast<int>(v);
          },
          [=](const ExperimentConfig &c) { return YAML::Node(acc(const_cast<ExperimentConfig &>(c))); }};
}

Field LongField(std::string section, std::string key, Access<long> acc, long lo) {
  return {section, key,
          [=](ExperimentConfig &c, const YAML::Node &n, const std::string &where) {
            const long v = Scalar<long>(n, where, "an integer");
            if (v < lo) Bad(where, "must be >= " + std::to_string(lo));
            acc(c) = v;
          },
          [=](const ExperimentConfig &c) { return YAML::Node(acc(const_cast<ExperimentConfig &>(c))); }};
}

// Shortest text that reads back to the same double.
YAML::Node NumberNode(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return YAML::Node(std::string(buf, res.ptr));
}

Field DoubleField(std::string section, std::string key, Access<double> acc, double lo,
                  double hi, bool open_lo = false) {
  return {section, key,
          [=](ExperimentConfig &c, const YAML::Node &n, const std::string &where) {
            const double v = Scalar<double>(n, where, "a number");
            if (!std::isfinite(v) || v < lo || v > hi || (open_lo && v == lo)) {
              std::ostringstream os;
              os << "must lie in " << (open_lo ? "(" : "[") << lo << ", " << hi << "]";
              Bad(where, os.str());
            }
            acc(c) = v;
          },
          [=](const ExperimentConfig &c) { return NumberNode(acc(const_cast<ExperimentConfig &>(c))); }};
}

Field BoolField(std::string section, std::string key, Access<bool> acc) {
  return {section, key,
          [=](ExperimentConfig &c, const YAML::Node &n, const std::string &where) {
            acc(c) = Scalar<bool>(n, where, "true or false");
          },
          [=](const ExperimentConfig &c) { return YAML::Node(acc(const_cast<ExperimentConfig &>(c))); }};
}

Field StringField(std::string section, std::string key, Access<std::string> acc,
                  std::vector<std::string> choices = {}) {
  return {section, key,
          [=](ExperimentConfig &c, const YAML::Node &n, const std::string &where) {
            const auto v = Scalar<std::string>(n, where, "a string");
            if (!choices.empty() && std::find(choices.begin(), choices.end(), v) == choices.end()) {
              std::string all;
              for (const auto &s : choices) all += (all.empty() ? "" : "|") + s;
              Bad(where, "'" + v + "' is not one of " + all);
            }
            acc(c) = v;
          },
          [=](const ExperimentConfig &c) { return YAML::Node(acc(const_cast<ExperimentConfig &>(c))); }};
}

// Enum stored in the config, read and written through its name.
template <typename E>
Field EnumField(std::string section, std::string key, Access<E> acc,
                std::vector<std::pair<std::string, E>> names) {
  return {section, key,
          [=](ExperimentConfig &c, const YAML::Node &n, const std::string &where) {
            const auto v = Scalar<std::string>(n, where, "a string");
            std::string all;
            for (const auto &[name, e] : names) {
              if (name == v) {
                acc(c) = e;
                return;
              }
              all += (all.empty() ? "" : "|") + name;
            }
            Bad(where, "'" + v + "' is not one of " + all);
          },
          [=](const ExperimentConfig &c) {
            const E e = acc(const_cast<ExperimentConfig &>(c));
            for (const auto &[name, x] : names)
              if (x == e) return YAML::Node(name);
            return YAML::Node();
          }};
}

template <typename T>
Field ListField(std::string section, std::string key, Access<std::vector<T>> acc, double lo,
                double hi, const char *type) {
  return {section, key,
          [=](ExperimentConfig &c, const YAML::Node &n, const std::string &where) {
            if (!n.IsSequence()) Bad(where, "expected a list");
            std::vector<T> out;
            for (std::size_t i = 0; i < n.size(); ++i) {
              const std::string w = where + "[" + std::to_string(i) + "]";
              const T v = Scalar<T>(n[i], w, type);
              if (!(static_cast<double>(v) >= lo && static_cast<double>(v) <= hi)) {
                std::ostringstream os;
                os << "must lie in [" << lo << ", " << hi << "]";
                Bad(w, os.str());
              }
              out.push_back(v);
            }
            acc(c) = out;
          },
          [=](const ExperimentConfig &c) {
            YAML::Node n(YAML::NodeType::Sequence);
            for (const T &v : acc(const_cast<ExperimentConfig &>(c))) {
              if constexpr (std::is_floating_point_v<T>) n.push_back(NumberNode(v));
              else n.push_back(v);
            }
            n.SetStyle(YAML::EmitterStyle::Flow);
            return n;
          }};
}

const std::vector<Field> &Schema() {
  static const std::vector<Field> fields = [] {
    using C = ExperimentConfig;
    std::vector<Field> f;
    f.push_back(StringField("", "preset", [](C &c) -> std::string & { return c.preset; }, PresetNames()));
    f.push_back(EnumField<Protocol>("", "protocol", [](C &c) -> Protocol & { return c.protocol; },
                                    {{"voxceleb", Protocol::kVoxceleb}, {"himia", Protocol::kHimia}}));
    f.push_back({"", "seed",
                 [](C &c, const YAML::Node &n, const std::string &w) {
                   c.seed = Scalar<uint64_t>(n, w, "a non-negative integer");
                 },
                 [](const C &c) { return YAML::Node(c.seed); }});
    f.push_back(IntField("", "threads", [](C &c) -> int & { return c.threads; }, 1, 256));
    f.push_back(StringField("", "init_checkpoint", [](C &c) -> std::string & { return c.init_checkpoint; }));

    f.push_back(StringField("corpus", "train_dir", [](C &c) -> std::string & { return c.corpus.train_dir; }));
    f.push_back(StringField("corpus", "test_dir", [](C &c) -> std::string & { return c.corpus.test_dir; }));
    f.push_back(IntField("corpus", "train_speakers", [](C &c) -> int & { return c.corpus.train_speakers; }, 2, 100000));
    f.push_back(IntField("corpus", "test_speakers", [](C &c) -> int & { return c.corpus.test_speakers; }, 2, 100000));
    f.push_back(IntField("corpus", "train_utts", [](C &c) -> int & { return c.corpus.train_utts; }, 1, 100000));
    f.push_back(IntField("corpus", "test_utts", [](C &c) -> int & { return c.corpus.test_utts; }, 1, 100000));
    f.push_back(DoubleField("corpus", "min_duration", [](C &c) -> double & { return c.corpus.min_duration; }, 0.5, 10.0));
    f.push_back(DoubleField("corpus", "max_duration", [](C &c) -> double & { return c.corpus.max_duration; }, 0.5, 10.0));
    f.push_back(DoubleField("corpus", "syllable_rate", [](C &c) -> double & { return c.corpus.syllable_rate; }, 1.0, 10.0));
    f.push_back(ListField<double>("corpus", "train_rates", [](C &c) -> std::vector<double> & { return c.corpus.train_rates; }, 0.1, 10.0, "a number"));
    f.push_back(ListField<double>("corpus", "test_rates", [](C &c) -> std::vector<double> & { return c.corpus.test_rates; }, 0.1, 10.0, "a number"));

    f.push_back(StringField("augment", "plan", [](C &c) -> std::string & { return c.augment.plan; }, {"none", "voxceleb", "uniform"}));
    f.push_back(ListField<double>("augment", "alphas", [](C &c) -> std::vector<double> & { return c.augment.alphas; }, 0.5, 2.0, "a number"));
    f.push_back(DoubleField("augment", "fraction", [](C &c) -> double & { return c.augment.fraction; }, 0.0, 1.0, true));
    f.push_back(IntField("augment", "frame_length", [](C &c) -> int & { return c.augment.tsm.frame_length; }, 16, 1 << 16));
    f.push_back(IntField("augment", "synthesis_hop", [](C &c) -> int & { return c.augment.tsm.synthesis_hop; }, 1, 1 << 16));
    f.push_back(IntField("augment", "search_tolerance", [](C &c) -> int & { return c.augment.tsm.search_tolerance; }, 0, 1 << 16));

    f.push_back(IntField("features", "num_ceps", [](C &c) -> int & { return c.features.mfcc.num_ceps; }, 1, 128));
    f.push_back(IntField("features", "num_mel_bins", [](C &c) -> int & { return c.features.mfcc.num_mel_bins; }, 1, 256));
    f.push_back(DoubleField("features", "low_freq", [](C &c) -> double & { return c.features.mfcc.low_freq; }, 0.0, 8000.0));
    f.push_back(DoubleField("features", "high_freq", [](C &c) -> double & { return c.features.mfcc.high_freq; }, 0.0, 8000.0));
    f.push_back(DoubleField("features", "preemph", [](C &c) -> double & { return c.features.mfcc.preemph; }, 0.0, 1.0));
    f.push_back(IntField("features", "cmn_window", [](C &c) -> int & { return c.features.cmn_window; }, 1, 100000));
    f.push_back(DoubleField("features", "vad_relative_offset", [](C &c) -> double & { return c.features.vad.relative_offset; }, -kInf, kInf));
    f.push_back(DoubleField("features", "vad_absolute_floor", [](C &c) -> double & { return c.features.vad.absolute_floor; }, -kInf, kInf));

    f.push_back(IntField("model", "channels", [](C &c) -> int & { return c.train.model.channels; }, 1, 4096));
    f.push_back(IntField("model", "embed_dim", [](C &c) -> int & { return c.train.model.embed_dim; }, 2, 4096));
    f.push_back(ListField<int>("model", "kernel_sizes", [](C &c) -> std::vector<int> & { return c.train.model.kernel_sizes; }, 1, 64, "an integer"));
    f.push_back(ListField<int>("model", "dilations", [](C &c) -> std::vector<int> & { return c.train.model.dilations; }, 1, 64, "an integer"));
    f.push_back(IntField("model", "attention_ratio", [](C &c) -> int & { return c.train.model.attention_ratio; }, 1, 4096));
    f.push_back(IntField("model", "cos_dim", [](C &c) -> int & { return c.train.model.cos_dim; }, 1, 4096));
    f.push_back(EnumField<DecompositionMode>(
        "model", "decomposition", [](C &c) -> DecompositionMode & { return c.train.model.mode; },
        {{"none", DecompositionMode::kNone}, {"attention", DecompositionMode::kAttention},
         {"parallel", DecompositionMode::kParallelProjection}}));
    f.push_back(DoubleField("model", "pool_epsilon", [](C &c) -> double & { return c.train.model.pool_epsilon; }, 0.0, 1.0, true));

    f.push_back(DoubleField("loss", "lambda1", [](C &c) -> double & { return c.train.loss.lambda1; }, 0.0, kInf));
    f.push_back(DoubleField("loss", "lambda2", [](C &c) -> double & { return c.train.loss.lambda2; }, 0.0, kInf));
    f.push_back(DoubleField("loss", "am_scale", [](C &c) -> double & { return c.train.loss.am_scale; }, 0.0, kInf, true));
    f.push_back(DoubleField("loss", "am_margin", [](C &c) -> double & { return c.train.loss.am_margin; }, 0.0, 0.999999));
    f.push_back(DoubleField("loss", "epsilon", [](C &c) -> double & { return c.train.loss.epsilon; }, 0.0, 1.0, true));

    f.push_back(LongField("train", "steps", [](C &c) -> long & { return c.train.steps; }, 0));
    f.push_back(IntField("train", "batch_size", [](C &c) -> int & { return c.train.batch_size; }, 1, 1 << 20));
    f.push_back(IntField("train", "chunk_frames", [](C &c) -> int & { return c.train.chunk_frames; }, 1, 1 << 20));
    f.push_back(IntField("train", "max_phase_iters", [](C &c) -> int & { return c.train.max_phase_iters; }, 1, 1 << 20));
    f.push_back(IntField("train", "min_phase_iters", [](C &c) -> int & { return c.train.min_phase_iters; }, 1, 1 << 20));
    const char *group_keys[] = {"lr_encoder", "lr_attention", "lr_id_head", "lr_rate_head", "lr_cosine_map"};
    for (int g = 0; g < kNumParamGroups; ++g)
      f.push_back(DoubleField("train", group_keys[g],
                              [g](C &c) -> double & { return c.train.learning_rates[g]; }, 0.0, kInf));
    f.push_back(DoubleField("train", "momentum", [](C &c) -> double & { return c.train.momentum; }, 0.0, 0.999999));
    f.push_back(IntField("train", "probe_batch", [](C &c) -> int & { return c.train.probe_batch; }, 0, 1 << 20));
    f.push_back(LongField("train", "checkpoint_every", [](C &c) -> long & { return c.train.checkpoint_every; }, 0));

    f.push_back(EnumField<ScoringBackend>(
        "backend", "type", [](C &c) -> ScoringBackend & { return c.backend.backend; },
        {{"plda", ScoringBackend::kPlda}, {"cosine", ScoringBackend::kCosine}}));
    f.push_back(BoolField("backend", "length_norm", [](C &c) -> bool & { return c.backend.length_norm; }));
    f.push_back(IntField("backend", "plda_iterations", [](C &c) -> int & { return c.backend.plda.iterations; }, 0, 10000));

    f.push_back(ListField<double>("eval", "alphas", [](C &c) -> std::vector<double> & { return c.eval_alphas; }, 0.5, 2.0, "a number"));
    return f;
  }();
  return fields;
}

const std::vector<std::string> &SectionOrder() {
  static const std::vector<std::string> order{"corpus", "augment", "features", "model",
                                              "loss",   "train",   "backend",  "eval"};
  return order;
}

std::string Where(const std::string &source, const YAML::Node &node, const std::string &field) {
  const auto mark = node.Mark();
  std::string s = source;
  if (mark.line >= 0) s += ":" + std::to_string(mark.line + 1);
  return s + ": " + field;
}

}  // namespace

const std::vector<std::string> &PresetNames() {
  static const std::vector<std::string> names{"baseline", "tsm_aug", "fd_att", "al_cos", "fd_al",
                                              "s6",       "s7",      "s9",     "s10",    "s11",
                                              "s12"};
  return names;
}

ExperimentConfig PresetConfig(const std::string &preset) {
  ExperimentConfig c;
  c.preset = preset;
  c.eval_alphas = AlphaGrid();
  auto plain = [&] {
    c.train.model.mode = DecompositionMode::kNone;
    c.train.loss.lambda1 = 0.0;
    c.train.loss.lambda2 = 0.0;
  };
  auto fd_att = [&] {
    c.train.model.mode = DecompositionMode::kAttention;
    c.train.loss.lambda2 = 0.0;
  };
  auto al_cos = [&] { c.train.model.mode = DecompositionMode::kParallelProjection; };
  auto fd_al = [&] { c.train.model.mode = DecompositionMode::kAttention; };
  const bool himia = preset.size() > 1 && preset[0] == 's' && std::isdigit(static_cast<unsigned char>(preset[1]));
  if (himia) {
    c.protocol = Protocol::kHimia;
    c.augment.plan = "none";
    c.corpus.train_rates = {0.7, 1.0, 1.4};
  }
  if (preset == "baseline") {
    plain();
    c.augment.plan = "none";
  } else if (preset == "tsm_aug") {
    plain();
  } else if (preset == "fd_att" || preset == "s10") {
    fd_att();
  } else if (preset == "al_cos" || preset == "s11") {
    al_cos();
  } else if (preset == "fd_al" || preset == "s12") {
    fd_al();
  } else if (preset == "s6") {
    plain();
  } else if (preset == "s7") {
    plain();
    c.corpus.train_rates = {1.0};
  } else if (preset == "s9") {
    plain();
    c.corpus.train_rates = {1.0};
    c.augment.plan = "uniform";
    c.augment.alphas = {0.8, 0.9, 1.1, 1.2};
    c.augment.fraction = 0.5;
  } else {
    Fail(ErrorKind::kConfig, "unknown preset '" + preset + "'");
  }
  return c;
}

void ValidateExperimentConfig(const ExperimentConfig &c) {
  if (c.corpus.min_duration > c.corpus.max_duration)
    Fail(ErrorKind::kConfig, "corpus.min_duration exceeds corpus.max_duration");
  if (c.corpus.train_dir.empty() != c.corpus.test_dir.empty())
    Fail(ErrorKind::kConfig, "corpus.train_dir and corpus.test_dir must be given together");
  if (c.protocol == Protocol::kHimia && c.corpus.test_rates.empty())
    Fail(ErrorKind::kConfig, "corpus.test_rates must not be empty");
  if (c.corpus.train_rates.empty()) Fail(ErrorKind::kConfig, "corpus.train_rates must not be empty");
  for (double r : c.corpus.train_rates)
    if (c.corpus.syllable_rate * r < 1.0 || c.corpus.syllable_rate * r > 10.0)
      Fail(ErrorKind::kConfig, "corpus.train_rates: syllable_rate * rate must lie in [1, 10]");
  if (c.augment.plan == "uniform") {
    if (c.augment.alphas.empty())
      Fail(ErrorKind::kConfig, "augment.alphas must be given for the uniform plan");
    ValidatePlan(PlanUniform(c.augment.alphas, c.augment.fraction));
  }
  ValidateTsmOptions(c.augment.tsm);
  if (c.features.mfcc.low_freq >= c.features.mfcc.high_freq)
    Fail(ErrorKind::kConfig, "features.low_freq must be below features.high_freq");
  if (c.features.mfcc.num_ceps > c.features.mfcc.num_mel_bins)
    Fail(ErrorKind::kConfig, "features.num_ceps must not exceed features.num_mel_bins");
  ModelConfig m = c.train.model;
  m.input_dim = c.features.mfcc.num_ceps;
  ValidateModelConfig(m);
  ValidateLossConfig(c.train.loss);
  if (c.train.chunk_frames < m.ReceptiveField())
    Fail(ErrorKind::kConfig, "train.chunk_frames must be at least the receptive field (" +
                                 std::to_string(m.ReceptiveField()) + ")");
  if (c.protocol == Protocol::kVoxceleb && c.eval_alphas.empty())
    Fail(ErrorKind::kConfig, "eval.alphas must not be empty");
}

ExperimentConfig ParseConfig(const std::string &yaml_text, const std::string &source) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException &e) {
    Fail(ErrorKind::kConfig, source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) Fail(ErrorKind::kConfig, source + ": top level must be a mapping");

  std::string preset = "fd_al";
  if (root["preset"]) {
    const auto n = root["preset"];
    preset = Scalar<std::string>(n, Where(source, n, "preset"), "a string");
    const auto &names = PresetNames();
    if (std::find(names.begin(), names.end(), preset) == names.end())
      Bad(Where(source, n, "preset"), "unknown preset '" + preset + "'");
  }
  ExperimentConfig cfg = PresetConfig(preset);

  const auto &schema = Schema();
  auto find = [&](const std::string &section, const std::string &key) -> const Field * {
    for (const auto &f : schema)
      if (f.section == section && f.key == key) return &f;
    return nullptr;
  };
  const auto &sections = SectionOrder();
  for (auto it = root.begin(); it != root.end(); ++it) {
    const std::string key = it->first.Scalar();
    const YAML::Node value = it->second;
    if (std::find(sections.begin(), sections.end(), key) != sections.end()) {
      if (value.IsNull()) continue;
      if (!value.IsMap()) Bad(Where(source, value, key), "expected a mapping");
      for (auto jt = value.begin(); jt != value.end(); ++jt) {
        const std::string sub = jt->first.Scalar();
        const Field *f = find(key, sub);
        if (f == nullptr) Bad(Where(source, jt->first, key + "." + sub), "unknown key");
        f->set(cfg, jt->second, Where(source, jt->second, key + "." + sub));
      }
      continue;
    }
    const Field *f = find("", key);
    if (f == nullptr) Bad(Where(source, it->first, key), "unknown key");
    f->set(cfg, value, Where(source, value, key));
  }
  try {
    ValidateExperimentConfig(cfg);
  } catch (const Error &e) {
    Fail(ErrorKind::kConfig, source + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig LoadConfig(const std::string &path) {
  std::ifstream is(path);
  if (!is) Fail(ErrorKind::kConfig, "cannot read config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ParseConfig(ss.str(), path);
}

namespace {

YAML::Node SectionNode(const ExperimentConfig &cfg, const std::string &section) {
  YAML::Node n(YAML::NodeType::Map);
  for (const auto &f : Schema())
    if (f.section == section) n[f.key] = f.get(cfg);
  return n;
}

std::string Emit(const YAML::Node &node) {
  YAML::Emitter out;
  out << node;
  return out.c_str();
}

}  // namespace

std::string DumpConfig(const ExperimentConfig &cfg) {
  YAML::Node root(YAML::NodeType::Map);
  for (const auto &f : Schema())
    if (f.section.empty()) root[f.key] = f.get(cfg);
  for (const auto &s : SectionOrder()) root[s] = SectionNode(cfg, s);
  return Emit(root) + "\n";
}

std::string ConfigSections(const ExperimentConfig &cfg, const std::vector<std::string> &names) {
  std::string out;
  for (const auto &name : names) {
    YAML::Node n(YAML::NodeType::Map);
    if (std::find(SectionOrder().begin(), SectionOrder().end(), name) != SectionOrder().end()) {
      n[name] = SectionNode(cfg, name);
    } else {
      bool found = false;
      for (const auto &f : Schema())
        if (f.section.empty() && f.key == name) {
          n[name] = f.get(cfg);
          found = true;
        }
      if (!found) Fail(ErrorKind::kArgument, "unknown config section '" + name + "'");
    }
    out += Emit(n) + "\n";
  }
  return out;
}

}  // namespace rateinv
