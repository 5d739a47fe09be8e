// include/adaptsv/am_softmax.hpp

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

#include <span>

#include "adaptsv/tensor.hpp"

namespace adaptsv {

struct AmSoftmaxResult {
  double loss = 0.0;
  Matrix grad_embeddings;  // batch x dim
  Matrix grad_weights;     // n_classes x dim
};

// Additive-margin softmax cross-entropy, averaged over the batch:
//
//   L = -1/B sum_b log( e^{s(cos_y - m)} / (e^{s(cos_y - m)} + sum_{j!=y} e^{s cos_j}) )
//
// with cos_j = <w_j/|w_j|, x/|x|>. Both the embeddings and the class-weight
// rows are normalized internally and the gradients are taken with respect to
// the unnormalized inputs. Throws DataError for an out-of-range label or a
// zero-norm row.
AmSoftmaxResult am_softmax_loss(const Matrix& embeddings, std::span<const int> labels,
                                const Matrix& class_weights, double margin, double scale);

}  // namespace adaptsv
