// include/adaptsv/embedding_model.hpp

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

// Res2Net speaker-embedding network (inference path).
//
//   features (1 x n_mels x T)
//     -> 7x7 stem conv, BN, ReLU
//     -> Res2Net bottleneck stacks
//     -> mean over frequency           (C x T')
//     -> attentive statistics pooling  (2C)
//     -> dense                          (embedding_dim)
//
// Every conv is followed by inference-mode batch norm. ReLU follows each conv
// except the block's final 1x1, where it is applied after the residual sum.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adaptsv/containers.hpp"
#include "adaptsv/embedding.hpp"
#include "adaptsv/features.hpp"
#include "adaptsv/model_config.hpp"
#include "adaptsv/tensor.hpp"

namespace adaptsv {

enum class Exec { kSerial, kParallel };

struct BatchNorm {
  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> running_mean;
  std::vector<double> running_var;
  double eps = 1e-5;

  static BatchNorm identity(int channels, double eps);
  int channels() const { return static_cast<int>(gamma.size()); }
  void apply(Tensor3& x) const;
};

struct Conv2d {
  int in_channels = 1;
  int out_channels = 1;
  int kernel_h = 1;
  int kernel_w = 1;
  int stride_h = 1;
  int stride_w = 1;
  int pad_h = 0;
  int pad_w = 0;
  std::vector<double> weight;  // [out][in][kh][kw]
  std::vector<double> bias;    // empty or out_channels

  static Conv2d make(int in, int out, int kernel, int stride_h, int stride_w, int pad);
  Tensor3 forward(const Tensor3& x, Exec exec) const;
};

struct ConvBn {
  Conv2d conv;
  BatchNorm bn;

  Tensor3 forward(const Tensor3& x, Exec exec, bool relu) const;
};

// The multi-scale 3x3 stage. subset_convs holds K_2..K_s, each a 3x3,
// stride-1, padding-1 conv over one subset followed by BN and ReLU.
struct Res2NetModule {
  int scale = 2;
  std::vector<ConvBn> subset_convs;
};

struct Res2NetBlock {
  ConvBn reduce;                     // 1x1, carries the stack stride
  Res2NetModule module;
  ConvBn expand;                     // 1x1 back to the block width
  std::optional<ConvBn> projection;  // 1x1 residual path when shapes change
};

struct AttentiveStatsPooling {
  int channels = 1;
  int hidden = 1;
  std::vector<double> w1;  // [hidden][channels]
  std::vector<double> b1;  // [hidden]
  std::vector<double> v;   // [hidden]
  double c = 0.0;
  double eps = 1e-5;
};

struct AspOutput {
  std::vector<double> pooled;     // concat(mean, std), 2C
  std::vector<double> attention;  // T weights, sum 1
};

struct DenseLayer {
  int in = 1;
  int out = 1;
  std::vector<double> weight;  // [out][in]
  std::vector<double> bias;    // [out]
};

struct ParameterSet {
  ModelConfig config;
  ConvBn stem;
  std::vector<std::vector<Res2NetBlock>> stages;
  AttentiveStatsPooling asp;
  DenseLayer embedding;
  Matrix class_weights;  // n_classes x embedding_dim, unit rows

  // Trainable scalars (conv/dense weights and biases, BN affine terms, ASP);
  // BN running statistics are excluded.
  std::size_t trainable_count(bool include_classifier = false) const;

  std::vector<NamedArray> to_named_arrays() const;
  static ParameterSet from_named_arrays(const ModelConfig& config, std::span<const NamedArray> arrays);

  bool operator==(const ParameterSet& o) const;
};

// Multi-scale cascade: y_1 = x_1, y_2 = K_2(x_2), y_i = K_i(x_i + y_{i-1}); output is the
// channel concatenation of y_1..y_s. Throws ConfigError when the channel
// count is not divisible by the scale or the subset convs do not fit.
Tensor3 res2net_module_forward(const Tensor3& x, const Res2NetModule& module, Exec exec = Exec::kParallel);

Tensor3 res2net_block_forward(const Tensor3& x, const Res2NetBlock& block, Exec exec = Exec::kParallel);

// frames is C x T (after frequency pooling).
AspOutput asp_pool(const Matrix& frames, const AttentiveStatsPooling& asp);

// Smallest frame count that survives the stride schedule.
int min_frames(const ModelConfig& config);

// Full forward pass in double precision.
std::vector<double> embed_values(const FeatureMatrix& features, const ParameterSet& params,
                                 Exec exec = Exec::kParallel);
Embedding embed(const FeatureMatrix& features, const ParameterSet& params, Exec exec = Exec::kParallel);

// He-uniform convs/dense, identity batch norm, Gaussian unit rows for the
// class weights. All values are representable in float32.
ParameterSet init_params(const ModelConfig& config, std::uint64_t seed);

std::uint64_t count_params(const ModelConfig& config, bool include_classifier = false);
std::uint64_t count_macs(const ModelConfig& config, int input_frames);

}  // namespace adaptsv
