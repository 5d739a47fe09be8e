// include/adaptsv/kernels.hpp

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

#pragma once

// Data-parallel inner loops used by the embedding network and trial scoring.
//
// Every kernel exists twice: `serial::` is the reference loop nest and
// `omp::` distributes the outermost independent index over OpenMP threads.
// Both evaluate each output element with the same operation order, so their
// results are bit-identical regardless of thread count.

#include <cstddef>
#include <span>
#include <utility>

namespace adaptsv::kernels {

struct Conv2dShape {
  int in_channels = 1;
  int in_height = 1;   // frequency
  int in_width = 1;    // time
  int out_channels = 1;
  int kernel_h = 1;
  int kernel_w = 1;
  int stride_h = 1;
  int stride_w = 1;
  int pad_h = 0;
  int pad_w = 0;

  int out_height() const { return (in_height + 2 * pad_h - kernel_h) / stride_h + 1; }
  int out_width() const { return (in_width + 2 * pad_w - kernel_w) / stride_w + 1; }
  std::size_t weight_count() const {
    return static_cast<std::size_t>(out_channels) * in_channels * kernel_h * kernel_w;
  }
  std::size_t input_count() const {
    return static_cast<std::size_t>(in_channels) * in_height * in_width;
  }
  std::size_t output_count() const {
    return static_cast<std::size_t>(out_channels) * out_height() * out_width();
  }
};

// Pair of embeddings to compare; both spans must have equal length.
using VectorPair = std::pair<std::span<const float>, std::span<const float>>;

namespace serial {

// Zero-padded cross-correlation, layouts [C][H][W] and weights [O][C][KH][KW].
// `bias` is either empty or has out_channels entries.
void conv2d(const Conv2dShape& shape, std::span<const double> input,
            std::span<const double> weights, std::span<const double> bias,
            std::span<double> output);

// y = W x + b with W row-major [out][in]; `bias` may be empty.
void dense(std::span<const double> weights, std::span<const double> bias,
           std::span<const double> x, std::span<double> y);

// Cosine similarity per pair, clamped to [-1, 1]. A pair containing a zero
// vector yields NaN; callers turn that into an error.
void cosine_batch(std::span<const VectorPair> pairs, std::span<double> scores);

}  // namespace serial

namespace omp {

void conv2d(const Conv2dShape& shape, std::span<const double> input,
            std::span<const double> weights, std::span<const double> bias,
            std::span<double> output);

void dense(std::span<const double> weights, std::span<const double> bias,
           std::span<const double> x, std::span<double> y);

void cosine_batch(std::span<const VectorPair> pairs, std::span<double> scores);

}  // namespace omp

namespace detail {

// Per-output-element bodies shared by both variants.
void conv2d_channel(const Conv2dShape& shape, const double* input,
                    const double* weights, double bias, double* output, int oc);
double dense_row(const double* row, const double* x, std::size_t n);
double cosine(std::span<const float> a, std::span<const float> b);
void check_conv_args(const Conv2dShape& shape, std::size_t input, std::size_t weights,
                     std::size_t bias, std::size_t output);
void check_dense_args(std::size_t weights, std::size_t bias, std::size_t x, std::size_t y);

}  // namespace detail

}  // namespace adaptsv::kernels
