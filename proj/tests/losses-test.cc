// tests/losses-test.cc

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

#include <doctest.h>

#include <cmath>
#include <random>

#include "gradcheck.h"
#include "rateinv/base/error.h"
#include "rateinv/losses/losses.h"
#include "test-util.h"

using namespace rateinv;
using namespace rateinv::testing;

TEST_CASE("cosine loss stays in the unit interval under fuzzing") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> logscale(-12.0, 12.0);
  for (int i = 0; i < 20000; ++i) {
    const std::size_t d = 1 + rng() % 32;
    auto u = RandomVector(rng, d, std::pow(10.0, logscale(rng)));
    auto v = RandomVector(rng, d, std::pow(10.0, logscale(rng)));
    if (i % 97 == 0) std::fill(u.begin(), u.end(), 0.0);
    const double l = CosineAdversarialLoss(u, v, 1e-8);
    REQUIRE(l >= 0.0);
    REQUIRE(l <= 1.0);
  }
}

TEST_CASE("cosine loss reference cases") {
  std::vector<double> a{1, 0}, b{0, 1}, c{1, 1}, a3{3, 0}, na{-2, 0};
  CHECK(std::abs(CosineAdversarialLoss(a, a3, 1e-8) - 1.0) < 1e-12);
  CHECK(std::abs(CosineAdversarialLoss(a, na, 1e-8) - 1.0) < 1e-12);
  CHECK(std::abs(CosineAdversarialLoss(a, b, 1e-8)) < 1e-12);
  CHECK(std::abs(CosineAdversarialLoss(a, c, 1e-8) - 0.5) < 1e-12);
  std::vector<double> z{0, 0}, du(2), dv(2);
  CHECK(CosineAdversarialLoss(z, a, 1e-8, du, dv) == 0.0);
  for (double g : du) CHECK(std::isfinite(g));
}

TEST_CASE("cosine loss is invariant to positive rescaling") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    auto u = RandomVector(rng, 8), v = RandomVector(rng, 8);
    const double base = CosineAdversarialLoss(u, v, 1e-8);
    const double c = std::exp(std::uniform_real_distribution<double>(-5, 5)(rng));
    auto cu = u;
    for (double &x : cu) x *= c;
    CHECK(CosineAdversarialLoss(cu, v, 1e-8) == doctest::Approx(base).epsilon(1e-12));
    CHECK(CosineAdversarialLoss(v, cu, 1e-8) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("am-softmax without margin is scaled softmax cross-entropy") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> cosine(-1, 1);
  for (int i = 0; i < 500; ++i) {
    const int k = 2 + static_cast<int>(rng() % 9);
    const int y = static_cast<int>(rng() % k);
    std::vector<double> c(k), z(k);
    for (int j = 0; j < k; ++j) z[j] = 30.0 * (c[j] = cosine(rng));
    double lse = 0;
    for (double v : z) lse += std::exp(v);
    const double want = std::log(lse) - z[y];
    CHECK(std::abs(AmSoftmaxLoss(c, y, 30.0, 0.0) - want) < 1e-10);
    CHECK(std::abs(AmSoftmaxLoss(c, y, 30.0, 0.0) - SoftmaxCrossEntropy(z, y)) < 1e-10);
  }
}

TEST_CASE("margin raises the loss") {
  std::vector<double> c{0.5, 0.2, -0.1};
  CHECK(AmSoftmaxLoss(c, 0, 30.0, 0.2) > AmSoftmaxLoss(c, 0, 30.0, 0.0));
  CHECK_THROWS_AS(AmSoftmaxLoss(c, 3, 30.0, 0.2), Error);
  CHECK_THROWS_AS(RateCrossEntropy(c, -1), Error);
}

TEST_CASE("confident predictions keep gradient precision") {
  std::vector<double> z{40.0, 0.0, -5.0}, g(3);
  const double l = SoftmaxCrossEntropy(z, 0, g);
  CHECK(l == doctest::Approx(std::exp(-40.0)).epsilon(1e-6));
  CHECK(g[0] == doctest::Approx(-std::exp(-40.0)).epsilon(1e-6));
  CHECK(std::abs(g[0] + g[1] + g[2]) < 1e-30);
}

TEST_CASE("loss gradients") {
  for (auto st : {CheckCosineLoss(200, 7), CheckAmSoftmax(200, 8), CheckRateCrossEntropy(200, 9)}) {
    INFO(st.name);
    CHECK(st.max_error < kGradTolerance);
  }
}

TEST_CASE("loss config validation and total") {
  LossConfig c;
  CHECK_NOTHROW(ValidateLossConfig(c));
  CHECK(TotalLoss(1.0, 2.0, 3.0, c) == doctest::Approx(1.5));
  for (auto mutate : std::vector<void (*)(LossConfig &)>{
           [](LossConfig &x) { x.lambda1 = -0.1; }, [](LossConfig &x) { x.lambda2 = -1; },
           [](LossConfig &x) { x.am_scale = 0; }, [](LossConfig &x) { x.am_margin = 1.0; },
           [](LossConfig &x) { x.epsilon = 0; }}) {
    LossConfig bad;
    mutate(bad);
    try {
      ValidateLossConfig(bad);
      FAIL("expected kConfig");
    } catch (const Error &e) {
      CHECK(e.kind() == ErrorKind::kConfig);
    }
  }
}
