// src/kernels/serial.cpp

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

#include "adaptsv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adaptsv/error.hpp"

namespace adaptsv::kernels {

namespace detail {

void check_conv_args(const Conv2dShape& s, std::size_t input, std::size_t weights,
                     std::size_t bias, std::size_t output) {
  if (s.in_channels < 1 || s.out_channels < 1 || s.kernel_h < 1 || s.kernel_w < 1 ||
      s.stride_h < 1 || s.stride_w < 1 || s.pad_h < 0 || s.pad_w < 0)
    throw ConfigError("conv2d: invalid shape parameters");
  if (s.out_height() < 1 || s.out_width() < 1)
    throw DataError("conv2d: input " + std::to_string(s.in_height) + "x" +
                    std::to_string(s.in_width) + " too small for kernel");
  if (input != s.input_count() || weights != s.weight_count() || output != s.output_count() ||
      (bias != 0 && bias != static_cast<std::size_t>(s.out_channels)))
    throw ConfigError("conv2d: buffer sizes do not match shape");
}

void check_dense_args(std::size_t weights, std::size_t bias, std::size_t x, std::size_t y) {
  if (x == 0 || y == 0 || weights != x * y || (bias != 0 && bias != y))
    throw ConfigError("dense: buffer sizes do not match");
}

void conv2d_channel(const Conv2dShape& s, const double* input, const double* weights,
                    double bias, double* output, int oc) {
  const int oh = s.out_height();
  const int ow = s.out_width();
  double* out = output + static_cast<std::size_t>(oc) * oh * ow;
  std::fill(out, out + static_cast<std::size_t>(oh) * ow, bias);
  const double* w_oc = weights + static_cast<std::size_t>(oc) * s.in_channels * s.kernel_h * s.kernel_w;
  for (int ic = 0; ic < s.in_channels; ++ic) {
    const double* in = input + static_cast<std::size_t>(ic) * s.in_height * s.in_width;
    for (int ky = 0; ky < s.kernel_h; ++ky) {
      for (int kx = 0; kx < s.kernel_w; ++kx) {
        const double w = w_oc[(static_cast<std::size_t>(ic) * s.kernel_h + ky) * s.kernel_w + kx];
        if (w == 0.0) continue;
        // Output columns whose input column lies inside the image.
        const int off_x = kx - s.pad_w;
        int ox_begin = off_x >= 0 ? 0 : (-off_x + s.stride_w - 1) / s.stride_w;
        int ox_end = (s.in_width - 1 - off_x) >= 0 ? (s.in_width - 1 - off_x) / s.stride_w + 1 : 0;
        ox_end = std::min(ox_end, ow);
        if (ox_begin >= ox_end) continue;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * s.stride_h - s.pad_h + ky;
          if (iy < 0 || iy >= s.in_height) continue;
          const double* row = in + static_cast<std::size_t>(iy) * s.in_width;
          double* orow = out + static_cast<std::size_t>(oy) * ow;
          if (s.stride_w == 1) {
            for (int ox = ox_begin; ox < ox_end; ++ox) orow[ox] += w * row[ox + off_x];
          } else {
            for (int ox = ox_begin; ox < ox_end; ++ox) orow[ox] += w * row[ox * s.stride_w + off_x];
          }
        }
      }
    }
  }
}

double dense_row(const double* row, const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += row[i] * x[i];
  return acc;
}

double cosine(std::span<const float> a, std::span<const float> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i], y = b[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace detail

namespace serial {

void conv2d(const Conv2dShape& shape, std::span<const double> input,
            std::span<const double> weights, std::span<const double> bias,
            std::span<double> output) {
  detail::check_conv_args(shape, input.size(), weights.size(), bias.size(), output.size());
  for (int oc = 0; oc < shape.out_channels; ++oc)
    detail::conv2d_channel(shape, input.data(), weights.data(), bias.empty() ? 0.0 : bias[oc],
                           output.data(), oc);
}

void dense(std::span<const double> weights, std::span<const double> bias,
           std::span<const double> x, std::span<double> y) {
  detail::check_dense_args(weights.size(), bias.size(), x.size(), y.size());
  for (std::size_t o = 0; o < y.size(); ++o)
    y[o] = (bias.empty() ? 0.0 : bias[o]) + detail::dense_row(weights.data() + o * x.size(), x.data(), x.size());
}

void cosine_batch(std::span<const VectorPair> pairs, std::span<double> scores) {
  if (pairs.size() != scores.size()) throw ConfigError("cosine_batch: size mismatch");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first.size() != pairs[i].second.size())
      throw ConfigError("cosine_batch: dimension mismatch at pair " + std::to_string(i));
    scores[i] = detail::cosine(pairs[i].first, pairs[i].second);
  }
}

}  // namespace serial
}  // namespace adaptsv::kernels
