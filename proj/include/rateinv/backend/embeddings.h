// include/rateinv/backend/embeddings.h

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

#ifndef RATEINV_BACKEND_EMBEDDINGS_H_
#define RATEINV_BACKEND_EMBEDDINGS_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rateinv/corpus/manifest.h"
#include "rateinv/feat/feature-matrix.h"
#include "rateinv/model/params.h"

namespace rateinv {

// utt_id -> x_id vector; all vectors share one dimension.
struct EmbeddingSet {
  std::map<std::string, std::vector<double>> vectors;
  std::size_t Dim() const { return vectors.empty() ? 0 : vectors.begin()->second.size(); }
};

struct ExtractReport {
  std::vector<std::string> skipped;  // "utt_id: reason"
};

// Full-utterance forward for every manifest row that has features.
// Utterances without features or shorter than the receptive field are
// skipped and listed in the report. Items are spread over num_threads
// threads; the result does not depend on the thread count.
EmbeddingSet ExtractEmbeddings(const ModelParams &params,
                               const std::vector<UtteranceRecord> &manifest,
                               const std::map<std::string, FeatureMatrix> &features,
                               ExtractReport *report = nullptr, int num_threads = 1);

// Text format, one "utt_id v_1 ... v_D" line per vector, values printed
// with round-trip precision.
void WriteEmbeddings(const std::filesystem::path &file, const EmbeddingSet &set);
EmbeddingSet ReadEmbeddings(const std::filesystem::path &file);

}  // namespace rateinv

#endif  // RATEINV_BACKEND_EMBEDDINGS_H_
