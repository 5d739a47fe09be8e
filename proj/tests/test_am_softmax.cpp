// tests/test_am_softmax.cpp

// Copyright 2026  The adaptsv Authors

// See LICENSE at the top of the source tree for clarification regarding
// multiple authors.
//
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

#include <cmath>
#include <random>

#include <doctest.h>

#include "adaptsv/am_softmax.hpp"
#include "adaptsv/error.hpp"
#include "gradcheck.hpp"

using namespace adaptsv;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(r, c);
  for (double& v : m.data) v = g(rng);
  return m;
}

}  // namespace

TEST_CASE("one class without margin has zero loss") {
  Matrix x(2, 3), w(1, 3);
  x.data = {1, 2, 3, -1, 0.5, 2};
  w.data = {0.3, -0.2, 0.9};
  const std::vector<int> y{0, 0};
  CHECK(am_softmax_loss(x, y, w, 0.0, 30.0).loss == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("aligned two-class case equals softplus(-24)") {
  Matrix x(1, 2), w(2, 2);
  x.data = {1, 0};
  w.data = {1, 0, 0, 1};
  const std::vector<int> y{0};
  const double expect = std::log1p(std::exp(30.0 * (0.0 - 0.8)));
  const double loss = am_softmax_loss(x, y, w, 0.2, 30.0).loss;
  CHECK(loss == doctest::Approx(expect).epsilon(1e-12));
  CHECK(loss == doctest::Approx(3.775e-11).epsilon(1e-3));
}

TEST_CASE("analytic gradients match central differences") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix x = random_matrix(4, 8, rng), w = random_matrix(5, 8, rng);
    for (std::size_t r = 0; r < w.rows; ++r) {
      double n = 0;
      for (double v : w.row(r)) n += v * v;
      for (double& v : w.row(r)) v /= std::sqrt(n);
    }
    const std::vector<int> y{0, 3, 4, 3};
    const auto res = am_softmax_loss(x, y, w, 0.2, 30.0);
    auto f = [&] { return am_softmax_loss(x, y, w, 0.2, 30.0).loss; };
    CHECK(gradcheck::worst_error(x.data, res.grad_embeddings.data, f) < 1e-4);
    CHECK(gradcheck::worst_error(w.data, res.grad_weights.data, f) < 1e-4);
  }
}

TEST_CASE("loss falls as the target cosine rises, rises with the margin") {
  // The rotation stays orthogonal to class 1, so only cos(theta_y) changes.
  Matrix w(2, 3);
  w.data = {1, 0, 0, 0, 1, 0};
  const std::vector<int> y{0};
  double prev = INFINITY;
  for (double angle = 1.5; angle >= 0.0; angle -= 0.1) {
    Matrix x(1, 3);
    x.data = {std::cos(angle), 0.0, std::sin(angle)};
    const double l = am_softmax_loss(x, y, w, 0.2, 30.0).loss;
    CHECK(l < prev);
    prev = l;
  }
  Matrix x(1, 3);
  x.data = {0.8, 0.6, 0.0};
  double last = -1;
  for (double m = 0.0; m <= 0.5; m += 0.05) {
    const double l = am_softmax_loss(x, y, w, m, 30.0).loss;
    CHECK(l >= last);
    last = l;
  }
}

TEST_CASE("bad labels and zero rows are rejected") {
  Matrix x(1, 2), w(2, 2);
  x.data = {1, 0};
  w.data = {1, 0, 0, 1};
  const std::vector<int> bad{2};
  CHECK_THROWS_AS(am_softmax_loss(x, bad, w, 0.2, 30.0), DataError);
  const std::vector<int> neg{-1};
  CHECK_THROWS_AS(am_softmax_loss(x, neg, w, 0.2, 30.0), DataError);
  Matrix z(1, 2);
  const std::vector<int> ok{0};
  CHECK_THROWS_AS(am_softmax_loss(z, ok, w, 0.2, 30.0), DataError);
}
