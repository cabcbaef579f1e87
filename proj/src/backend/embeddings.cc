// src/backend/embeddings.cc

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

#include "rateinv/backend/embeddings.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "rateinv/base/error.h"
#include "rateinv/model/network.h"

namespace rateinv {

EmbeddingSet ExtractEmbeddings(const ModelParams &params,
                               const std::vector<UtteranceRecord> &manifest,
                               const std::map<std::string, FeatureMatrix> &features,
                               ExtractReport *report, int num_threads) {
  const std::size_t n = manifest.size();
  std::vector<std::vector<double>> out(n);
  std::vector<std::string> why(n);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n; i += stride) {
      auto it = features.find(manifest[i].utt_id);
      if (it == features.end()) {
        why[i] = "no features";
        continue;
      }
      try {
        out[i] = ExtractIdEmbedding(params, it->second);
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::kTooShort) throw;
        why[i] = e.what();
      }
    }
  };
  const std::size_t threads =
      std::max<std::size_t>(1, std::min<std::size_t>(n, static_cast<std::size_t>(num_threads)));
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
  EmbeddingSet set;
  for (std::size_t i = 0; i < n; ++i) {
    if (!why[i].empty()) {
      if (report != nullptr) report->skipped.push_back(manifest[i].utt_id + ": " + why[i]);
      continue;
    }
    set.vectors[manifest[i].utt_id] = std::move(out[i]);
  }
  return set;
}

void WriteEmbeddings(const std::filesystem::path &file, const EmbeddingSet &set) {
  std::ofstream os(file);
  if (!os) Fail(ErrorKind::kIo, "cannot write " + file.string());
  char buf[32];
  for (const auto &[utt, v] : set.vectors) {
    os << utt;
    for (double x : v) {
      auto res = std::to_chars(buf, buf + sizeof(buf), x);
      os << ' ' << std::string_view(buf, res.ptr - buf);
    }
    os << '\n';
  }
  if (!os) Fail(ErrorKind::kIo, "error writing " + file.string());
}

EmbeddingSet ReadEmbeddings(const std::filesystem::path &file) {
  std::ifstream is(file);
  if (!is) Fail(ErrorKind::kIo, "cannot open " + file.string());
  EmbeddingSet set;
  std::string line, tok;
  std::size_t lineno = 0, dim = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string utt;
    ss >> utt;
    std::vector<double> v;
    while (ss >> tok) {
      double x = 0;
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        Fail(ErrorKind::kFormat, file.string() + ":" + std::to_string(lineno) + ": bad number");
      v.push_back(x);
    }
    if (v.empty() || (dim != 0 && v.size() != dim))
      Fail(ErrorKind::kFormat, file.string() + ":" + std::to_string(lineno) +
                                   ": inconsistent embedding dimension");
    dim = v.size();
    if (!set.vectors.emplace(utt, std::move(v)).second)
      Fail(ErrorKind::kFormat, file.string() + ": duplicate utterance " + utt);
  }
  return set;
}

}  // namespace rateinv
