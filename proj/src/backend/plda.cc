// src/backend/plda.cc

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

#include "rateinv/backend/plda.h"

#include <cmath>
#include <numbers>

#include "rateinv/base/error.h"
#include "rateinv/base/log.h"
#include "rateinv/kernels/kernels.h"

namespace rateinv {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double LogDet(const Eigen::LLT<MatrixXd> &llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

Eigen::LLT<MatrixXd> Cholesky(const MatrixXd &m, const char *what) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    Fail(ErrorKind::kNumerical, std::string("PLDA: ") + what + " is not positive definite");
  return llt;
}

// Adds a ridge to W if it is not safely positive definite; returns the
// ridge added (0 if none).
double Regularize(MatrixXd *w, double ridge) {
  *w = 0.5 * (*w + w->transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(*w, Eigen::EigenvaluesOnly);
  const double scale = std::max(w->diagonal().mean(), 1e-300);
  if (es.eigenvalues().minCoeff() <= ridge * scale) {
    const double eps = ridge * scale;
    w->diagonal().array() += eps;
    return eps;
  }
  return 0.0;
}

}  // namespace

double PldaLogLikelihood(const PldaModel &model, const std::vector<MatrixXd> &classes) {
  const auto d = model.mu.size();
  const double log2pi = std::log(2.0 * std::numbers::pi);
  const auto w_llt = Cholesky(model.within, "W");
  const double logdet_w = LogDet(w_llt);
  double total = 0.0;
  for (const auto &x : classes) {
    const double n = static_cast<double>(x.cols());
    const VectorXd mean = x.rowwise().mean();
    const MatrixXd dev = x.colwise() - mean;
    // An orthonormal change of variables splits the class into sqrt(n) * mean
    // and n - 1 contrasts, each contrast ~ N(0, W).
    const double within_quad = (dev.array() * w_llt.solve(dev).array()).sum();
    total += -0.5 * (n - 1.0) * (d * log2pi + logdet_w) - 0.5 * within_quad;
    // sqrt(n) * mean ~ N(sqrt(n) mu, n B + W).
    const auto m_llt = Cholesky(n * model.between + model.within, "nB + W");
    const VectorXd r = mean - model.mu;
    total += -0.5 * (d * log2pi + LogDet(m_llt)) - 0.5 * n * r.dot(m_llt.solve(r));
  }
  return total;
}

PldaModel TrainPlda(const std::vector<MatrixXd> &classes, const PldaOptions &opts,
                    std::vector<double> *loglik) {
  if (classes.size() < 2) Fail(ErrorKind::kArgument, "PLDA needs at least 2 speakers");
  if (opts.iterations < 0) Fail(ErrorKind::kArgument, "PLDA iterations must be >= 0");
  const auto d = classes[0].rows();
  std::size_t total = 0;
  bool multi = false;
  for (const auto &x : classes) {
    if (x.rows() != d || x.cols() == 0)
      Fail(ErrorKind::kDimension, "PLDA: inconsistent or empty class");
    total += static_cast<std::size_t>(x.cols());
    multi = multi || x.cols() >= 2;
  }
  if (!multi) Fail(ErrorKind::kArgument, "PLDA needs a speaker with at least 2 utterances");

  const double s = static_cast<double>(classes.size());
  const double big_n = static_cast<double>(total);
  PldaModel model;
  model.mu = VectorXd::Zero(d);
  for (const auto &x : classes) model.mu += x.rowwise().sum();
  model.mu /= big_n;
  model.within = MatrixXd::Zero(d, d);
  model.between = MatrixXd::Zero(d, d);
  for (const auto &x : classes) {
    const VectorXd mean = x.rowwise().mean();
    const MatrixXd dev = x.colwise() - mean;
    model.within += dev * dev.transpose();
    const VectorXd r = mean - model.mu;
    model.between += r * r.transpose();
  }
  model.within /= big_n;
  model.between /= s;
  double ridge_used = Regularize(&model.within, opts.ridge);

  if (loglik != nullptr) loglik->assign(1, PldaLogLikelihood(model, classes));
  for (int it = 0; it < opts.iterations; ++it) {
    // E-step: posterior of each speaker variable,
    //   m_s = mu + B (B + W/n)^-1 (xbar - mu),  C_s = B - B (B + W/n)^-1 B.
    VectorXd sum_m = VectorXd::Zero(d);
    MatrixXd sum_mm = MatrixXd::Zero(d, d);
    MatrixXd new_w = MatrixXd::Zero(d, d);
    for (const auto &x : classes) {
      const double n = static_cast<double>(x.cols());
      const auto llt = Cholesky(model.between + model.within / n, "B + W/n");
      const VectorXd mean = x.rowwise().mean();
      const VectorXd m = model.mu + model.between * llt.solve(mean - model.mu);
      MatrixXd c = model.between - model.between * llt.solve(model.between);
      c = 0.5 * (c + c.transpose());
      sum_m += m;
      sum_mm += c + m * m.transpose();
      const MatrixXd dev = x.colwise() - m;
      new_w += dev * dev.transpose() + n * c;
    }
    // M-step.
    model.mu = sum_m / s;
    model.between = sum_mm / s - model.mu * model.mu.transpose();
    model.between = 0.5 * (model.between + model.between.transpose());
    model.within = new_w / big_n;
    ridge_used = std::max(ridge_used, Regularize(&model.within, opts.ridge));
    if (loglik != nullptr) loglik->push_back(PldaLogLikelihood(model, classes));
  }
  if (ridge_used > 0.0)
    RATEINV_WARN("PLDA: within-class covariance singular; ridge up to {:.3g} added", ridge_used);
  return model;
}

PldaScorer::PldaScorer(const PldaModel &model) : mu_(model.mu) {
  const MatrixXd t = model.between + model.within;
  const auto t_llt = Cholesky(t, "B + W");
  const MatrixXd t_inv = t_llt.solve(MatrixXd::Identity(t.rows(), t.cols()));
  MatrixXd schur = t - model.between * t_inv * model.between;
  schur = 0.5 * (schur + schur.transpose());
  const auto s_llt = Cholesky(schur, "T - B T^-1 B");
  const MatrixXd a = s_llt.solve(MatrixXd::Identity(t.rows(), t.cols()));
  MatrixXd c = -t_inv * model.between * a;
  c = 0.5 * (c + c.transpose());
  q_ = t_inv - a;
  q_ = 0.5 * (q_ + q_.transpose());
  p_ = -c;
  offset_ = 0.5 * LogDet(t_llt) - 0.5 * LogDet(s_llt);
}

double PldaScorer::Score(const VectorXd &enroll, const VectorXd &test) const {
  if (enroll.size() != mu_.size() || test.size() != mu_.size())
    Fail(ErrorKind::kDimension, "PLDA score: vector dimension mismatch");
  const VectorXd x1 = enroll - mu_, x2 = test - mu_;
  return 0.5 * x1.dot(q_ * x1) + 0.5 * x2.dot(q_ * x2) + x1.dot(p_ * x2) + offset_;
}

EmbeddingPreprocessor EmbeddingPreprocessor::Fit(const std::vector<VectorXd> &train,
                                                 bool length_norm) {
  if (train.empty()) Fail(ErrorKind::kArgument, "no embeddings to fit preprocessing");
  EmbeddingPreprocessor p;
  p.length_norm = length_norm;
  p.mean = VectorXd::Zero(train[0].size());
  for (const auto &x : train) {
    if (x.size() != p.mean.size()) Fail(ErrorKind::kDimension, "embedding dimension mismatch");
    p.mean += x;
  }
  p.mean /= static_cast<double>(train.size());
  return p;
}

VectorXd EmbeddingPreprocessor::Apply(const VectorXd &x) const {
  if (x.size() != mean.size()) Fail(ErrorKind::kDimension, "embedding dimension mismatch");
  VectorXd y = x - mean;
  if (length_norm) {
    const double norm = y.norm();
    if (norm > 0.0) y *= std::sqrt(static_cast<double>(y.size())) / norm;
  }
  return y;
}

double CosineScore(const std::vector<double> &a, const std::vector<double> &b) {
  if (a.size() != b.size()) Fail(ErrorKind::kDimension, "cosine score: dimension mismatch");
  const double na = std::sqrt(kernels::Dot(a, a)), nb = std::sqrt(kernels::Dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return kernels::Dot(a, b) / (na * nb);
}

}  // namespace rateinv
