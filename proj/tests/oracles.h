// tests/oracles.h

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

#ifndef RATEINV_TESTS_ORACLES_H_
#define RATEINV_TESTS_ORACLES_H_

// Independent reference implementations used to check the backend.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace rateinv {
namespace testing {

// Interpolated-ROC EER by exhaustive sweep: every distinct score is a
// threshold (accept when score >= u), counts are recomputed from scratch for
// each, the reject-all point (1, 0) closes the curve, and the first segment
// on which Pmiss - Pfa changes sign is interpolated linearly.
inline double BruteForceEer(const std::vector<double> &tar, const std::vector<double> &non) {
  std::set<double> thresholds(tar.begin(), tar.end());
  thresholds.insert(non.begin(), non.end());
  std::vector<std::pair<double, double>> roc;  // (pmiss, pfa)
  for (double u : thresholds) {
    double miss = 0, fa = 0;
    for (double s : tar) miss += s < u;
    for (double s : non) fa += s >= u;
    roc.emplace_back(miss / tar.size(), fa / non.size());
  }
  roc.emplace_back(1.0, 0.0);
  for (std::size_t i = 0; i < roc.size(); ++i) {
    const double d1 = roc[i].first - roc[i].second;
    if (d1 == 0.0) return roc[i].first;
    if (i > 0 && d1 > 0.0) {
      const double d0 = roc[i - 1].first - roc[i - 1].second;
      const double t = d0 / (d0 - d1);
      return roc[i - 1].first + t * (roc[i].first - roc[i - 1].first);
    }
  }
  return 1.0;
}

inline double GaussianLogPdf(const Eigen::VectorXd &x, const Eigen::VectorXd &mean,
                             const Eigen::MatrixXd &cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::VectorXd z = llt.matrixL().solve(x - mean);
  double logdet = 0;
  for (int i = 0; i < cov.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  return -0.5 * (z.squaredNorm() + logdet + x.size() * std::log(2.0 * std::numbers::pi));
}

// Same-speaker versus different-speaker log-likelihood ratio from the joint
// Gaussian of the stacked pair.
inline double DirectPldaLlr(const Eigen::VectorXd &mu, const Eigen::MatrixXd &b,
                            const Eigen::MatrixXd &w, const Eigen::VectorXd &x1,
                            const Eigen::VectorXd &x2) {
  const int d = static_cast<int>(mu.size());
  Eigen::VectorXd x(2 * d), m(2 * d);
  x << x1, x2;
  m << mu, mu;
  Eigen::MatrixXd same(2 * d, 2 * d), diff = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  same << b + w, b, b, b + w;
  diff.topLeftCorner(d, d) = b + w;
  diff.bottomRightCorner(d, d) = b + w;
  return GaussianLogPdf(x, m, same) - GaussianLogPdf(x, m, diff);
}

// Log-likelihood of grouped data, each class as one joint Gaussian of all
// its stacked samples.
inline double DirectPldaLogLikelihood(const Eigen::VectorXd &mu, const Eigen::MatrixXd &b,
                                      const Eigen::MatrixXd &w,
                                      const std::vector<Eigen::MatrixXd> &classes) {
  const int d = static_cast<int>(mu.size());
  double total = 0;
  for (const auto &c : classes) {
    const int n = static_cast<int>(c.cols());
    Eigen::VectorXd x(n * d), m(n * d);
    Eigen::MatrixXd cov(n * d, n * d);
    for (int i = 0; i < n; ++i) {
      x.segment(i * d, d) = c.col(i);
      m.segment(i * d, d) = mu;
      for (int j = 0; j < n; ++j) cov.block(i * d, j * d, d, d) = i == j ? b + w : b;
    }
    total += GaussianLogPdf(x, m, cov);
  }
  return total;
}

// Random symmetric positive definite matrix with the given eigenvalues.
inline Eigen::MatrixXd RandomSpd(const std::vector<double> &eig, std::mt19937_64 &rng) {
  const int d = static_cast<int>(eig.size());
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd e(d);
  for (int i = 0; i < d; ++i) e(i) = eig[i];
  return q * e.asDiagonal() * q.transpose();
}

// Samples `speakers` classes of `per_class` observations from y ~ N(mu, B),
// x = y + e, e ~ N(0, W).
inline std::vector<Eigen::MatrixXd> SampleTwoCovariance(const Eigen::VectorXd &mu,
                                                        const Eigen::MatrixXd &b,
                                                        const Eigen::MatrixXd &w, int speakers,
                                                        int per_class, std::mt19937_64 &rng) {
  const int d = static_cast<int>(mu.size());
  const Eigen::MatrixXd lb = Eigen::LLT<Eigen::MatrixXd>(b).matrixL();
  const Eigen::MatrixXd lw = Eigen::LLT<Eigen::MatrixXd>(w).matrixL();
  std::normal_distribution<double> g;
  auto draw = [&] {
    Eigen::VectorXd z(d);
    for (int i = 0; i < d; ++i) z(i) = g(rng);
    return z;
  };
  std::vector<Eigen::MatrixXd> out;
  for (int s = 0; s < speakers; ++s) {
    const Eigen::VectorXd y = mu + lb * draw();
    Eigen::MatrixXd c(d, per_class);
    for (int i = 0; i < per_class; ++i) c.col(i) = y + lw * draw();
    out.push_back(c);
  }
  return out;
}

}  // namespace testing
}  // namespace rateinv

#endif  // RATEINV_TESTS_ORACLES_H_
