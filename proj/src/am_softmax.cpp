// src/am_softmax.cpp

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

#include "adaptsv/am_softmax.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "adaptsv/error.hpp"

namespace adaptsv {

namespace {

double norm_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

AmSoftmaxResult am_softmax_loss(const Matrix& embeddings, std::span<const int> labels,
                                const Matrix& class_weights, double margin, double scale) {
  const std::size_t B = embeddings.rows, D = embeddings.cols, K = class_weights.rows;
  if (B == 0) throw DataError("am_softmax: empty batch");
  if (labels.size() != B) throw ConfigError("am_softmax: label count differs from batch size");
  if (class_weights.cols != D) throw ConfigError("am_softmax: class weight dimension mismatch");
  if (K == 0) throw ConfigError("am_softmax: no classes");

  std::vector<double> w_norm(K);
  Matrix w_hat(K, D);
  for (std::size_t j = 0; j < K; ++j) {
    w_norm[j] = norm_of(class_weights.row(j));
    if (w_norm[j] == 0.0) throw DataError("am_softmax: class weight row " + std::to_string(j) + " is zero");
    for (std::size_t d = 0; d < D; ++d) w_hat(j, d) = class_weights(j, d) / w_norm[j];
  }

  AmSoftmaxResult r;
  r.grad_embeddings = Matrix(B, D);
  r.grad_weights = Matrix(K, D);
  // Accumulated dL/d(w_hat), projected onto the row tangent space at the end.
  Matrix grad_w_hat(K, D);

  std::vector<double> x_hat(D), logits(K), g(K), grad_x_hat(D);
  double total = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    const int y = labels[b];
    if (y < 0 || static_cast<std::size_t>(y) >= K)
      throw DataError("am_softmax: label " + std::to_string(y) + " out of range [0, " + std::to_string(K) + ")");
    const double xn = norm_of(embeddings.row(b));
    if (xn == 0.0) throw DataError("am_softmax: embedding " + std::to_string(b) + " is zero");
    for (std::size_t d = 0; d < D; ++d) x_hat[d] = embeddings(b, d) / xn;

    for (std::size_t j = 0; j < K; ++j) {
      double c = 0.0;
      for (std::size_t d = 0; d < D; ++d) c += w_hat(j, d) * x_hat[d];
      logits[j] = scale * (c - (static_cast<int>(j) == y ? margin : 0.0));
    }
    const auto arg = static_cast<std::size_t>(std::max_element(logits.begin(), logits.end()) - logits.begin());
    const double mx = logits[arg];
    // z = 1 + rest; log1p keeps tiny losses accurate.
    double rest = 0.0;
    for (std::size_t j = 0; j < K; ++j)
      if (j != arg) rest += std::exp(logits[j] - mx);
    const double z = 1.0 + rest;
    total += (mx - logits[y]) + std::log1p(rest);

    // dL/dcos_j = scale * (p_j - [j == y]) / B
    for (std::size_t j = 0; j < K; ++j)
      g[j] = scale * (std::exp(logits[j] - mx) / z - (static_cast<int>(j) == y ? 1.0 : 0.0)) / static_cast<double>(B);

    std::fill(grad_x_hat.begin(), grad_x_hat.end(), 0.0);
    for (std::size_t j = 0; j < K; ++j)
      for (std::size_t d = 0; d < D; ++d) {
        grad_x_hat[d] += g[j] * w_hat(j, d);
        grad_w_hat(j, d) += g[j] * x_hat[d];
      }
    // Through x_hat = x / |x|: (I - x_hat x_hat^T) / |x|
    double proj = 0.0;
    for (std::size_t d = 0; d < D; ++d) proj += grad_x_hat[d] * x_hat[d];
    for (std::size_t d = 0; d < D; ++d) r.grad_embeddings(b, d) = (grad_x_hat[d] - proj * x_hat[d]) / xn;
  }

  for (std::size_t j = 0; j < K; ++j) {
    double proj = 0.0;
    for (std::size_t d = 0; d < D; ++d) proj += grad_w_hat(j, d) * w_hat(j, d);
    for (std::size_t d = 0; d < D; ++d) r.grad_weights(j, d) = (grad_w_hat(j, d) - proj * w_hat(j, d)) / w_norm[j];
  }
  r.loss = total / static_cast<double>(B);
  return r;
}

}  // namespace adaptsv
