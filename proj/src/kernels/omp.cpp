// src/kernels/omp.cpp

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

#include <omp.h>

#include <cstdint>
#include <string>

#include "adaptsv/error.hpp"
#include "adaptsv/kernels.hpp"

namespace adaptsv::kernels::omp {

void conv2d(const Conv2dShape& shape, std::span<const double> input,
            std::span<const double> weights, std::span<const double> bias,
            std::span<double> output) {
  detail::check_conv_args(shape, input.size(), weights.size(), bias.size(), output.size());
  const double* in = input.data();
  const double* w = weights.data();
  double* out = output.data();
#pragma omp parallel for schedule(static)
  for (int oc = 0; oc < shape.out_channels; ++oc)
    detail::conv2d_channel(shape, in, w, bias.empty() ? 0.0 : bias[oc], out, oc);
}

void dense(std::span<const double> weights, std::span<const double> bias,
           std::span<const double> x, std::span<double> y) {
  detail::check_dense_args(weights.size(), bias.size(), x.size(), y.size());
  const auto n_out = static_cast<std::int64_t>(y.size());
  const std::size_t n_in = x.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t o = 0; o < n_out; ++o)
    y[o] = (bias.empty() ? 0.0 : bias[o]) + detail::dense_row(weights.data() + o * n_in, x.data(), n_in);
}

void cosine_batch(std::span<const VectorPair> pairs, std::span<double> scores) {
  if (pairs.size() != scores.size()) throw ConfigError("cosine_batch: size mismatch");
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (pairs[i].first.size() != pairs[i].second.size())
      throw ConfigError("cosine_batch: dimension mismatch at pair " + std::to_string(i));
  const auto n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) scores[i] = detail::cosine(pairs[i].first, pairs[i].second);
}

}  // namespace adaptsv::kernels::omp
