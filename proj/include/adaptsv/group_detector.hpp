// include/adaptsv/group_detector.hpp

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

// Light fully connected classifier over speaker embeddings that infers the
// group context (e.g. gender) when no prior metadata is available.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adaptsv/calibration.hpp"
#include "adaptsv/containers.hpp"
#include "adaptsv/embedding_model.hpp"
#include "adaptsv/tensor.hpp"

namespace adaptsv {

enum class Activation { kRelu, kTanh };
std::string to_string(Activation a);
Activation parse_activation(const std::string& s);

struct DetectorConfig {
  int input_dim = 256;
  std::vector<int> hidden = {128, 256};
  int n_classes = 2;
  Activation activation = Activation::kRelu;
  double learning_rate = 0.05;
  int batch_size = 32;
  int epochs = 50;
  std::uint64_t seed = 0;
  bool class_weighting = false;  // inverse-frequency loss weights

  void validate() const;
};

struct DetectorParams {
  std::vector<DenseLayer> layers;
  Activation activation = Activation::kRelu;

  std::size_t count() const;
  int input_dim() const { return layers.empty() ? 0 : layers.front().in; }
  int n_classes() const { return layers.empty() ? 0 : layers.back().out; }

  std::vector<NamedArray> to_named_arrays() const;
  static DetectorParams from_named_arrays(std::span<const NamedArray> arrays, Activation activation);
};

// Rows of `features` are embeddings; labels index class_tags.
struct LabeledEmbeddingSet {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> ids;
  std::vector<std::string> class_tags;
  std::string split = "train";

  std::size_t size() const { return labels.size(); }
  void validate() const;
  // Rows [first, first + count) with the same class tags.
  LabeledEmbeddingSet slice(std::size_t first, std::size_t count, std::string split_tag) const;
};

// Weights + biases for the configured topology (256-128-256-2: 66,434).
std::uint64_t count_detector_params(const DetectorConfig& config);

DetectorParams init_detector(const DetectorConfig& config);

std::vector<double> detector_forward(std::span<const double> embedding, const DetectorParams& params);

struct DetectorGradients {
  double loss = 0.0;
  std::vector<DenseLayer> grads;  // same layout as DetectorParams::layers
};

// Mean (optionally class-weighted) cross-entropy over the rows of `inputs`
// and its analytic gradient. `class_weights` is empty or has n_classes entries.
DetectorGradients detector_loss_and_gradients(const DetectorParams& params, const Matrix& inputs,
                                              std::span<const int> labels,
                                              std::span<const double> class_weights = {});

struct TrainResult {
  DetectorParams params;
  std::vector<double> loss_history;  // epoch-mean loss
};

// Mini-batch SGD; deterministic given config.seed. Throws DataError when
// fewer than two classes are present.
TrainResult train_detector(const LabeledEmbeddingSet& data, const DetectorConfig& config);

double detector_accuracy(const DetectorParams& params, const LabeledEmbeddingSet& data);

struct PrPoint {
  double precision;
  double recall;
  double threshold;
};

// One point per distinct probability, ascending threshold; a sample is
// predicted positive iff its probability >= threshold. labels are 0/1.
std::vector<PrPoint> precision_recall_curve(std::span<const double> probabilities, std::span<const int> labels);

struct Detector {
  DetectorParams params;
  GroupDimension dimension = GroupDimension::kGender;
  std::vector<std::string> class_tags;
};

// Argmax class; ties resolve to the lowest index.
int detect_class(std::span<const double> embedding, const DetectorParams& params);
GroupKey detect(const Embedding& embedding, const Detector& detector);

// verify() with the context inferred from the test embedding.
Decision verify_inferred(const Embedding& test, const Embedding& enrolled, const Detector& detector,
                         const GroupThresholdTable& table,
                         ContextFallback fallback = ContextFallback::kSingleThreshold);

}  // namespace adaptsv
