// src/group_detector.cpp

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

#include "adaptsv/group_detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "adaptsv/error.hpp"

namespace adaptsv {

std::string to_string(Activation a) { return a == Activation::kRelu ? "relu" : "tanh"; }

Activation parse_activation(const std::string& s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "tanh") return Activation::kTanh;
  throw ConfigError("unknown activation '" + s + "'");
}

void DetectorConfig::validate() const {
  if (input_dim < 1 || n_classes < 1) throw ConfigError("detector config: dims must be >= 1");
  for (int h : hidden)
    if (h < 1) throw ConfigError("detector config: hidden widths must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("detector config: learning_rate must be > 0");
  if (batch_size < 1 || epochs < 1) throw ConfigError("detector config: batch_size and epochs must be >= 1");
}

std::size_t DetectorParams::count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

std::vector<NamedArray> DetectorParams::to_named_arrays() const {
  std::vector<NamedArray> out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const std::string p = "dense" + std::to_string(i);
    out.push_back({p + ".weight", {std::uint32_t(l.out), std::uint32_t(l.in)}, {l.weight.begin(), l.weight.end()}});
    out.push_back({p + ".bias", {std::uint32_t(l.out)}, {l.bias.begin(), l.bias.end()}});
  }
  return out;
}

DetectorParams DetectorParams::from_named_arrays(std::span<const NamedArray> arrays, Activation activation) {
  DetectorParams p;
  p.activation = activation;
  for (std::size_t i = 0;; ++i) {
    const std::string prefix = "dense" + std::to_string(i);
    const auto has = std::any_of(arrays.begin(), arrays.end(), [&](const NamedArray& a) { return a.name == prefix + ".weight"; });
    if (!has) break;
    const NamedArray& w = find_array(arrays, prefix + ".weight");
    const NamedArray& b = find_array(arrays, prefix + ".bias");
    if (w.shape.size() != 2 || b.shape.size() != 1 || b.shape[0] != w.shape[0])
      throw DataError("detector parameters: inconsistent shapes for " + prefix);
    if (!p.layers.empty() && static_cast<std::uint32_t>(p.layers.back().out) != w.shape[1])
      throw DataError("detector parameters: " + prefix + " input width does not match previous layer");
    DenseLayer l;
    l.out = static_cast<int>(w.shape[0]);
    l.in = static_cast<int>(w.shape[1]);
    l.weight.assign(w.values.begin(), w.values.end());
    l.bias.assign(b.values.begin(), b.values.end());
    p.layers.push_back(std::move(l));
  }
  if (p.layers.empty()) throw DataError("detector parameters: no dense layers found");
  return p;
}

void LabeledEmbeddingSet::validate() const {
  if (labels.size() != features.rows) throw DataError("labeled set: label count differs from embedding count");
  if (!ids.empty() && ids.size() != labels.size()) throw DataError("labeled set: id count differs from label count");
  for (int y : labels)
    if (y < 0 || static_cast<std::size_t>(y) >= class_tags.size())
      throw DataError("labeled set: label " + std::to_string(y) + " has no class tag");
}

LabeledEmbeddingSet LabeledEmbeddingSet::slice(std::size_t first, std::size_t count, std::string split_tag) const {
  if (first + count > size()) throw DataError("labeled set: slice out of range");
  LabeledEmbeddingSet out;
  out.features = Matrix(count, features.cols);
  std::copy(features.data.begin() + first * features.cols, features.data.begin() + (first + count) * features.cols,
            out.features.data.begin());
  out.labels.assign(labels.begin() + first, labels.begin() + first + count);
  if (!ids.empty()) out.ids.assign(ids.begin() + first, ids.begin() + first + count);
  out.class_tags = class_tags;
  out.split = std::move(split_tag);
  return out;
}

std::uint64_t count_detector_params(const DetectorConfig& config) {
  config.validate();
  std::uint64_t n = 0;
  std::uint64_t in = config.input_dim;
  for (int h : config.hidden) {
    n += in * h + h;
    in = h;
  }
  return n + in * config.n_classes + config.n_classes;
}

DetectorParams init_detector(const DetectorConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  DetectorParams p;
  p.activation = config.activation;
  int in = config.input_dim;
  std::vector<int> widths = config.hidden;
  widths.push_back(config.n_classes);
  for (int out : widths) {
    DenseLayer l;
    l.in = in;
    l.out = out;
    l.weight.resize(static_cast<std::size_t>(in) * out);
    const double bound = std::sqrt(6.0 / in);
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : l.weight) w = static_cast<float>(dist(rng));
    l.bias.assign(out, 0.0);
    p.layers.push_back(std::move(l));
    in = out;
  }
  return p;
}

namespace {

double activate(Activation a, double z) { return a == Activation::kRelu ? (z > 0.0 ? z : 0.0) : std::tanh(z); }

// Derivative expressed through the pre-activation and the activation value.
double activate_grad(Activation a, double z, double y) {
  return a == Activation::kRelu ? (z > 0.0 ? 1.0 : 0.0) : 1.0 - y * y;
}

void dense_apply(const DenseLayer& l, const double* x, double* y) {
  for (int o = 0; o < l.out; ++o) {
    const double* row = l.weight.data() + static_cast<std::size_t>(o) * l.in;
    double acc = l.bias[o];
    for (int i = 0; i < l.in; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
}

void softmax_inplace(std::vector<double>& z) {
  const double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) sum += (v = std::exp(v - mx));
  for (double& v : z) v /= sum;
}

// Pre-activations (z) and activations (a) for every layer of one sample.
struct Trace {
  std::vector<std::vector<double>> z;
  std::vector<std::vector<double>> a;  // a[0] is the input
};

void forward_trace(const DetectorParams& p, std::span<const double> x, Trace& t) {
  const std::size_t L = p.layers.size();
  t.z.resize(L);
  t.a.resize(L + 1);
  t.a[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < L; ++l) {
    t.z[l].resize(p.layers[l].out);
    dense_apply(p.layers[l], t.a[l].data(), t.z[l].data());
    t.a[l + 1] = t.z[l];
    if (l + 1 < L)
      for (double& v : t.a[l + 1]) v = activate(p.activation, v);
    else
      softmax_inplace(t.a[l + 1]);
  }
}

}  // namespace

std::vector<double> detector_forward(std::span<const double> embedding, const DetectorParams& params) {
  if (params.layers.empty()) throw ConfigError("detector: no layers");
  if (embedding.size() != static_cast<std::size_t>(params.input_dim()))
    throw DataError("detector: embedding dim " + std::to_string(embedding.size()) + " does not match input dim " +
                    std::to_string(params.input_dim()));
  Trace t;
  forward_trace(params, embedding, t);
  return t.a.back();
}

DetectorGradients detector_loss_and_gradients(const DetectorParams& params, const Matrix& inputs,
                                              std::span<const int> labels, std::span<const double> class_weights) {
  const std::size_t B = inputs.rows;
  if (B == 0 || labels.size() != B) throw DataError("detector gradients: empty batch or label count mismatch");
  if (inputs.cols != static_cast<std::size_t>(params.input_dim())) throw DataError("detector gradients: dim mismatch");
  const int K = params.n_classes();
  if (!class_weights.empty() && class_weights.size() != static_cast<std::size_t>(K))
    throw ConfigError("detector gradients: class weight count mismatch");

  DetectorGradients g;
  for (const auto& l : params.layers) {
    DenseLayer z = l;
    std::fill(z.weight.begin(), z.weight.end(), 0.0);
    std::fill(z.bias.begin(), z.bias.end(), 0.0);
    g.grads.push_back(std::move(z));
  }

  const std::size_t L = params.layers.size();
  Trace t;
  std::vector<double> delta, prev_delta;
  for (std::size_t b = 0; b < B; ++b) {
    const int y = labels[b];
    if (y < 0 || y >= K) throw DataError("detector gradients: label " + std::to_string(y) + " out of range");
    const double w = (class_weights.empty() ? 1.0 : class_weights[y]) / static_cast<double>(B);
    forward_trace(params, inputs.row(b), t);
    const auto& p = t.a.back();
    g.loss += -w * std::log(std::max(p[y], std::numeric_limits<double>::min()));

    delta.assign(p.begin(), p.end());
    delta[y] -= 1.0;
    for (double& d : delta) d *= w;

    for (std::size_t l = L; l-- > 0;) {
      const DenseLayer& layer = params.layers[l];
      DenseLayer& grad = g.grads[l];
      const auto& a_in = t.a[l];
      for (int o = 0; o < layer.out; ++o) {
        grad.bias[o] += delta[o];
        double* row = grad.weight.data() + static_cast<std::size_t>(o) * layer.in;
        for (int i = 0; i < layer.in; ++i) row[i] += delta[o] * a_in[i];
      }
      if (l == 0) break;
      prev_delta.assign(layer.in, 0.0);
      for (int o = 0; o < layer.out; ++o) {
        const double* row = layer.weight.data() + static_cast<std::size_t>(o) * layer.in;
        for (int i = 0; i < layer.in; ++i) prev_delta[i] += row[i] * delta[o];
      }
      for (int i = 0; i < layer.in; ++i) prev_delta[i] *= activate_grad(params.activation, t.z[l - 1][i], a_in[i]);
      std::swap(delta, prev_delta);
    }
  }
  return g;
}

TrainResult train_detector(const LabeledEmbeddingSet& data, const DetectorConfig& config) {
  config.validate();
  data.validate();
  if (data.size() == 0) throw DataError("train_detector: empty training set");
  if (data.features.cols != static_cast<std::size_t>(config.input_dim))
    throw DataError("train_detector: embedding dim does not match detector input_dim");
  if (data.class_tags.size() != static_cast<std::size_t>(config.n_classes))
    throw DataError("train_detector: class tag count does not match n_classes");
  std::vector<std::size_t> counts(config.n_classes, 0);
  for (int y : data.labels) ++counts[y];
  if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2)
    throw DataError("train_detector: need at least two classes present in the training data");

  std::vector<double> class_weights;
  if (config.class_weighting) {
    class_weights.resize(config.n_classes, 0.0);
    for (int k = 0; k < config.n_classes; ++k)
      if (counts[k] > 0)
        class_weights[k] = static_cast<double>(data.size()) / (static_cast<double>(config.n_classes) * counts[k]);
  }

  TrainResult r;
  r.params = init_detector(config);
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      Matrix batch(end - start, data.features.cols);
      std::vector<int> labels(end - start);
      for (std::size_t i = start; i < end; ++i) {
        const auto src = data.features.row(order[i]);
        std::copy(src.begin(), src.end(), batch.row(i - start).begin());
        labels[i - start] = data.labels[order[i]];
      }
      const auto g = detector_loss_and_gradients(r.params, batch, labels, class_weights);
      epoch_loss += g.loss * static_cast<double>(end - start);
      for (std::size_t l = 0; l < r.params.layers.size(); ++l) {
        auto& layer = r.params.layers[l];
        for (std::size_t k = 0; k < layer.weight.size(); ++k) layer.weight[k] -= config.learning_rate * g.grads[l].weight[k];
        for (std::size_t k = 0; k < layer.bias.size(); ++k) layer.bias[k] -= config.learning_rate * g.grads[l].bias[k];
      }
    }
    r.loss_history.push_back(epoch_loss / static_cast<double>(data.size()));
  }
  return r;
}

double detector_accuracy(const DetectorParams& params, const LabeledEmbeddingSet& data) {
  if (data.size() == 0) throw DataError("detector_accuracy: empty set");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (detect_class(data.features.row(i), params) == data.labels[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

std::vector<PrPoint> precision_recall_curve(std::span<const double> probabilities, std::span<const int> labels) {
  if (probabilities.empty() || probabilities.size() != labels.size())
    throw DataError("precision_recall_curve: need equally sized nonempty inputs");
  std::vector<std::pair<double, int>> items;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw DataError("precision_recall_curve: labels must be 0 or 1");
    positives += static_cast<std::size_t>(labels[i]);
    items.emplace_back(probabilities[i], labels[i]);
  }
  if (positives == 0 || positives == labels.size())
    throw DataError("precision_recall_curve: labels contain only one class");
  std::sort(items.begin(), items.end());

  // Walk thresholds upward; counts at and above the current threshold.
  std::vector<PrPoint> curve;
  std::size_t tp = positives, fp = labels.size() - positives;
  for (std::size_t i = 0; i < items.size();) {
    const double theta = items[i].first;
    curve.push_back({static_cast<double>(tp) / static_cast<double>(tp + fp),
                     static_cast<double>(tp) / static_cast<double>(positives), theta});
    for (; i < items.size() && items[i].first == theta; ++i) (items[i].second ? tp : fp)--;
  }
  return curve;
}

int detect_class(std::span<const double> embedding, const DetectorParams& params) {
  const auto p = detector_forward(embedding, params);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

GroupKey detect(const Embedding& embedding, const Detector& detector) {
  const std::vector<double> x(embedding.values.begin(), embedding.values.end());
  const int k = detect_class(x, detector.params);
  if (static_cast<std::size_t>(k) >= detector.class_tags.size())
    throw ConfigError("detect: class " + std::to_string(k) + " has no configured tag");
  return GroupKey::make(detector.dimension, detector.class_tags[k]);
}

Decision verify_inferred(const Embedding& test, const Embedding& enrolled, const Detector& detector,
                         const GroupThresholdTable& table, ContextFallback fallback) {
  return verify(test, enrolled, detect(test, detector), ContextSource::kInferred, table, fallback);
}

}  // namespace adaptsv
