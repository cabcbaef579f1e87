// src/model/checkpoint.cc

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

#include "rateinv/model/checkpoint.h"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "rateinv/base/error.h"

namespace rateinv {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

const char kMagic[] = "RATEINV-CKPT 1";

std::string JoinInts(const std::vector<int> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<int> SplitInts(const std::string &s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stoi(item));
  return v;
}

std::string Exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::map<std::string, std::string> ConfigToMeta(const ModelConfig &c) {
  return {{"model.input_dim", std::to_string(c.input_dim)},
          {"model.kernel_sizes", JoinInts(c.kernel_sizes)},
          {"model.dilations", JoinInts(c.dilations)},
          {"model.channels", std::to_string(c.channels)},
          {"model.embed_dim", std::to_string(c.embed_dim)},
          {"model.attention_ratio", std::to_string(c.attention_ratio)},
          {"model.cos_dim", std::to_string(c.cos_dim)},
          {"model.num_speakers", std::to_string(c.num_speakers)},
          {"model.num_rates", std::to_string(c.num_rates)},
          {"model.mode", DecompositionModeName(c.mode)},
          {"model.pool_epsilon", Exact(c.pool_epsilon)},
          {"model.sigma_margin", Exact(c.sigma_margin)},
          {"model.norm_epsilon", Exact(c.norm_epsilon)}};
}

template <typename T>
void Put(std::ostream &os, T v) {
  os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T Get(std::istream &is, const std::string &path) {
  T v;
  if (!is.read(reinterpret_cast<char *>(&v), sizeof(T)))
    Fail(ErrorKind::kFormat, path + ": truncated checkpoint");
  return v;
}

void WriteArray(std::ostream &os, const std::string &name, const std::vector<int> &shape,
                std::span<const double> data, CheckpointDtype dtype) {
  Put<uint32_t>(os, static_cast<uint32_t>(name.size()));
  os.write(name.data(), static_cast<std::streamsize>(name.size()));
  Put<uint8_t>(os, static_cast<uint8_t>(dtype));
  Put<uint32_t>(os, static_cast<uint32_t>(shape.size()));
  for (int d : shape) Put<uint32_t>(os, static_cast<uint32_t>(d));
  if (dtype == CheckpointDtype::kF64) {
    os.write(reinterpret_cast<const char *>(data.data()),
             static_cast<std::streamsize>(data.size() * sizeof(double)));
  } else {
    for (double v : data) Put<float>(os, static_cast<float>(v));
  }
}

}  // namespace

void WriteCheckpoint(const std::string &path, const Checkpoint &ckpt, CheckpointDtype dtype) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) Fail(ErrorKind::kIo, "cannot write checkpoint " + path);
    os << kMagic << '\n';
    for (const auto &[k, v] : ConfigToMeta(ckpt.params.config)) os << k << '=' << v << '\n';
    for (const auto &[k, v] : ckpt.meta) {
      if (k.find('=') != std::string::npos || k.find('\n') != std::string::npos ||
          v.find('\n') != std::string::npos || k.rfind("model.", 0) == 0)
        Fail(ErrorKind::kArgument, "invalid checkpoint metadata key '" + k + "'");
      os << k << '=' << v << '\n';
    }
    os << "end\n";
    const auto tensors = ckpt.params.Tensors();
    Put<uint32_t>(os, static_cast<uint32_t>(tensors.size() + ckpt.extra.size()));
    for (const auto &t : tensors) WriteArray(os, t.name, t.shape, t.data, dtype);
    for (const auto &[name, data] : ckpt.extra)
      WriteArray(os, "extra/" + name, {static_cast<int>(data.size())}, data, dtype);
    if (!os) Fail(ErrorKind::kIo, "error writing checkpoint " + path);
  }
  std::rename(tmp.c_str(), path.c_str());
}

Checkpoint ReadCheckpoint(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) Fail(ErrorKind::kIo, "cannot open checkpoint " + path);
  std::string line;
  if (!std::getline(is, line) || line != kMagic)
    Fail(ErrorKind::kFormat, path + ": not a checkpoint (bad magic)");
  std::map<std::string, std::string> meta;
  bool closed = false;
  while (std::getline(is, line)) {
    if (line == "end") {
      closed = true;
      break;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) Fail(ErrorKind::kFormat, path + ": bad metadata line");
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (!closed) Fail(ErrorKind::kFormat, path + ": unterminated metadata block");

  Checkpoint ckpt;
  ModelConfig cfg;
  auto take = [&](const std::string &key) {
    auto it = meta.find(key);
    if (it == meta.end()) Fail(ErrorKind::kFormat, path + ": missing " + key);
    std::string v = it->second;
    meta.erase(it);
    return v;
  };
  try {
    cfg.input_dim = std::stoi(take("model.input_dim"));
    cfg.kernel_sizes = SplitInts(take("model.kernel_sizes"));
    cfg.dilations = SplitInts(take("model.dilations"));
    cfg.channels = std::stoi(take("model.channels"));
    cfg.embed_dim = std::stoi(take("model.embed_dim"));
    cfg.attention_ratio = std::stoi(take("model.attention_ratio"));
    cfg.cos_dim = std::stoi(take("model.cos_dim"));
    cfg.num_speakers = std::stoi(take("model.num_speakers"));
    cfg.num_rates = std::stoi(take("model.num_rates"));
    cfg.mode = ParseDecompositionMode(take("model.mode"));
    cfg.pool_epsilon = std::stod(take("model.pool_epsilon"));
    cfg.sigma_margin = std::stod(take("model.sigma_margin"));
    cfg.norm_epsilon = std::stod(take("model.norm_epsilon"));
    ValidateModelConfig(cfg);
  } catch (const Error &e) {
    Fail(ErrorKind::kFormat, path + ": bad model config: " + e.what());
  } catch (const std::exception &e) {
    Fail(ErrorKind::kFormat, path + ": bad model config value");
  }
  ckpt.meta = std::move(meta);
  ckpt.params = ZeroParams(cfg);
  auto tensors = ckpt.params.Tensors();
  std::vector<bool> seen(tensors.size(), false);

  const uint32_t count = Get<uint32_t>(is, path);
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t len = Get<uint32_t>(is, path);
    if (len > 4096) Fail(ErrorKind::kFormat, path + ": bad array name length");
    std::string name(len, '\0');
    if (!is.read(name.data(), len)) Fail(ErrorKind::kFormat, path + ": truncated checkpoint");
    const uint8_t dtype = Get<uint8_t>(is, path);
    if (dtype > 1) Fail(ErrorKind::kFormat, path + ": unknown dtype for " + name);
    const uint32_t rank = Get<uint32_t>(is, path);
    if (rank > 8) Fail(ErrorKind::kFormat, path + ": bad rank for " + name);
    std::vector<int> shape(rank);
    std::size_t size = 1;
    for (auto &d : shape) {
      d = static_cast<int>(Get<uint32_t>(is, path));
      size *= static_cast<std::size_t>(d);
    }
    std::vector<double> data(size);
    if (dtype == 0) {
      if (!is.read(reinterpret_cast<char *>(data.data()),
                   static_cast<std::streamsize>(size * sizeof(double))))
        Fail(ErrorKind::kFormat, path + ": truncated array " + name);
    } else {
      for (auto &v : data) v = Get<float>(is, path);
    }
    if (name.rfind("extra/", 0) == 0) {
      ckpt.extra[name.substr(6)] = std::move(data);
      continue;
    }
    std::size_t k = 0;
    while (k < tensors.size() && tensors[k].name != name) ++k;
    if (k == tensors.size()) Fail(ErrorKind::kFormat, path + ": unexpected tensor " + name);
    if (tensors[k].shape != shape)
      Fail(ErrorKind::kFormat, path + ": shape mismatch for " + name);
    std::copy(data.begin(), data.end(), tensors[k].data.begin());
    seen[k] = true;
  }
  for (std::size_t k = 0; k < tensors.size(); ++k)
    if (!seen[k]) Fail(ErrorKind::kFormat, path + ": missing tensor " + tensors[k].name);
  return ckpt;
}

}  // namespace rateinv
