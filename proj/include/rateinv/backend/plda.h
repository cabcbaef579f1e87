// include/rateinv/backend/plda.h

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

#ifndef RATEINV_BACKEND_PLDA_H_
#define RATEINV_BACKEND_PLDA_H_

// Two-covariance PLDA: a speaker variable y ~ N(mu, B) and observations
// x = y + e, e ~ N(0, W). Trained by EM; trials scored by the closed-form
// same/different log-likelihood ratio.

#include <vector>

#include <Eigen/Dense>

namespace rateinv {

struct PldaModel {
  Eigen::VectorXd mu;
  Eigen::MatrixXd between;  // B
  Eigen::MatrixXd within;   // W
};

struct PldaOptions {
  int iterations = 10;
  // Relative ridge (times mean diagonal) added when W is singular.
  double ridge = 1e-6;
};

// Exact marginal log-likelihood of the grouped data under the model.
double PldaLogLikelihood(const PldaModel &model, const std::vector<Eigen::MatrixXd> &classes);

// classes[s] holds one sample per column. Requires >= 2 classes and at
// least one class with >= 2 samples (Error(kArgument) otherwise). When
// loglik is non-null it receives the log-likelihood before the first and
// after every iteration.
PldaModel TrainPlda(const std::vector<Eigen::MatrixXd> &classes, const PldaOptions &opts = {},
                    std::vector<double> *loglik = nullptr);

// Precomputed closed form of the log-likelihood ratio
//   0.5 x1'Q x1 + 0.5 x2'Q x2 + x1'P x2 + const
// for vectors centered at mu.
class PldaScorer {
 public:
  explicit PldaScorer(const PldaModel &model);
  double Score(const Eigen::VectorXd &enroll, const Eigen::VectorXd &test) const;
  std::size_t Dim() const { return mu_.size(); }

 private:
  Eigen::VectorXd mu_;
  Eigen::MatrixXd q_, p_;
  double offset_ = 0.0;
};

// Centering (mean of the training embeddings) and optional scaling of each
// vector to norm sqrt(D).
struct EmbeddingPreprocessor {
  Eigen::VectorXd mean;
  bool length_norm = true;
  static EmbeddingPreprocessor Fit(const std::vector<Eigen::VectorXd> &train, bool length_norm);
  Eigen::VectorXd Apply(const Eigen::VectorXd &x) const;
};

// Inner product of the unit-normalized vectors; Error(kDimension) on a
// size mismatch.
double CosineScore(const std::vector<double> &a, const std::vector<double> &b);

}  // namespace rateinv

#endif  // RATEINV_BACKEND_PLDA_H_
