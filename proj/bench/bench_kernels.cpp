// bench/bench_kernels.cpp

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

// Serial reference vs OpenMP kernels.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "adaptsv/kernels.hpp"

namespace k = adaptsv::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// One 3x3 stage of a 64-plane stack on a 40x100 map.
k::Conv2dShape conv_shape() {
  k::Conv2dShape s;
  s.in_channels = s.out_channels = 26;
  s.in_height = 40;
  s.in_width = 100;
  s.kernel_h = s.kernel_w = 3;
  s.pad_h = s.pad_w = 1;
  return s;
}

template <bool Parallel>
void BM_Conv2d(benchmark::State& state) {
  const auto s = conv_shape();
  const auto in = random_vec(s.input_count(), 1), w = random_vec(s.weight_count(), 2);
  std::vector<double> out(s.output_count());
  for (auto _ : state) {
    if (Parallel) k::omp::conv2d(s, in, w, {}, out);
    else k::serial::conv2d(s, in, w, {}, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.output_count()));
}

template <bool Parallel>
void BM_Dense(benchmark::State& state) {
  const std::size_t n_in = 3072, n_out = 256;
  const auto w = random_vec(n_in * n_out, 3), x = random_vec(n_in, 4), b = random_vec(n_out, 5);
  std::vector<double> y(n_out);
  for (auto _ : state) {
    if (Parallel) k::omp::dense(w, b, x, y);
    else k::serial::dense(w, b, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

template <bool Parallel>
void BM_Cosine(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), dim = 256;
  std::mt19937_64 rng(6);
  std::normal_distribution<float> g;
  std::vector<float> store(2 * n * dim);
  for (auto& x : store) x = g(rng);
  std::vector<k::VectorPair> pairs;
  for (std::size_t i = 0; i < n; ++i)
    pairs.emplace_back(std::span<const float>(store.data() + 2 * i * dim, dim),
                       std::span<const float>(store.data() + (2 * i + 1) * dim, dim));
  std::vector<double> scores(n);
  for (auto _ : state) {
    if (Parallel) k::omp::cosine_batch(pairs, scores);
    else k::serial::cosine_batch(pairs, scores);
    benchmark::DoNotOptimize(scores.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

}  // namespace

BENCHMARK(BM_Conv2d<false>)->Name("conv2d/serial");
BENCHMARK(BM_Conv2d<true>)->Name("conv2d/omp");
BENCHMARK(BM_Dense<false>)->Name("dense/serial");
BENCHMARK(BM_Dense<true>)->Name("dense/omp");
BENCHMARK(BM_Cosine<false>)->Name("cosine_batch/serial")->Arg(37720);
BENCHMARK(BM_Cosine<true>)->Name("cosine_batch/omp")->Arg(37720);

BENCHMARK_MAIN();
