// tests/test_kernels.cpp

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
#include <vector>

#include <doctest.h>

#include "adaptsv/error.hpp"
#include "adaptsv/kernels.hpp"

using namespace adaptsv;
namespace k = adaptsv::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("conv2d: OpenMP result is bit-identical to the serial loop") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> d(1, 6);
    k::Conv2dShape s;
    s.in_channels = d(rng);
    s.out_channels = d(rng);
    s.in_height = d(rng) + 4;
    s.in_width = d(rng) + 4;
    s.kernel_h = s.kernel_w = (trial % 3 == 0) ? 1 : 3;
    s.pad_h = s.pad_w = s.kernel_h / 2;
    s.stride_h = 1 + trial % 2;
    s.stride_w = 1 + (trial / 2) % 2;
    const auto in = random_vec(s.input_count(), rng), w = random_vec(s.weight_count(), rng);
    const auto b = random_vec(s.out_channels, rng);
    std::vector<double> a(s.output_count()), c(s.output_count());
    k::serial::conv2d(s, in, w, b, a);
    k::omp::conv2d(s, in, w, b, c);
    CHECK(a == c);
  }
}

TEST_CASE("conv2d: 1x1 kernel with unit weight copies its input") {
  k::Conv2dShape s;
  s.in_height = 2;
  s.in_width = 3;
  const std::vector<double> in{1, 2, 3, 4, 5, 6}, w{1.0};
  std::vector<double> out(6);
  k::serial::conv2d(s, in, w, {}, out);
  CHECK(out == in);
}

TEST_CASE("conv2d: mismatched buffers are rejected") {
  k::Conv2dShape s;
  std::vector<double> in(2), w(1), out(1);
  CHECK_THROWS_AS(k::serial::conv2d(s, in, w, {}, out), ConfigError);
}

TEST_CASE("dense: OpenMP matches serial and a hand computation") {
  const std::vector<double> w{1, 2, 3, 4, 5, 6}, b{0.5, -1}, x{1, 0, -1};
  std::vector<double> y(2), z(2);
  k::serial::dense(w, b, x, y);
  k::omp::dense(w, b, x, z);
  CHECK(y[0] == doctest::Approx(-1.5));
  CHECK(y[1] == doctest::Approx(-3.0));
  CHECK(y == z);
}

TEST_CASE("cosine_batch: serial and OpenMP agree, zero vectors give NaN") {
  std::mt19937_64 rng(5);
  std::normal_distribution<float> g;
  std::vector<float> buf(2 * 300 * 16);
  for (auto& v : buf) v = g(rng);
  std::fill(buf.begin(), buf.begin() + 16, 0.0f);
  std::vector<k::VectorPair> pairs;
  for (int i = 0; i < 300; ++i)
    pairs.emplace_back(std::span<const float>(buf.data() + 32 * i, 16), std::span<const float>(buf.data() + 32 * i + 16, 16));
  std::vector<double> a(300), b(300);
  k::serial::cosine_batch(pairs, a);
  k::omp::cosine_batch(pairs, b);
  CHECK(std::isnan(a[0]));
  CHECK(std::isnan(b[0]));
  for (int i = 1; i < 300; ++i) {
    CHECK(a[i] == b[i]);
    CHECK(std::abs(a[i]) <= 1.0);
  }
}
