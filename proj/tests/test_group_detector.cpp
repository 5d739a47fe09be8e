// tests/test_group_detector.cpp

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
#include <map>
#include <random>

#include <doctest.h>

#include "adaptsv/error.hpp"
#include "adaptsv/group_detector.hpp"
#include "adaptsv/synthetic.hpp"
#include "gradcheck.hpp"

using namespace adaptsv;

namespace {

LabeledEmbeddingSet small_set(std::size_t n, int dim, std::uint64_t seed) {
  return separable_clusters(n, dim, 1.0, 1.0, seed);
}

}  // namespace

TEST_CASE("parameter counts") {
  CHECK(count_detector_params(DetectorConfig{}) == 66434u);
  DetectorConfig single;
  single.hidden = {};
  CHECK(count_detector_params(single) == 514u);
  CHECK(init_detector(DetectorConfig{}).count() == 66434u);
}

TEST_CASE("forward: zero network is uniform, outputs are a distribution") {
  DetectorParams p = init_detector(DetectorConfig{});
  for (auto& l : p.layers) {
    std::fill(l.weight.begin(), l.weight.end(), 0.0);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
  const std::vector<double> x(256, 0.7);
  const auto probs = detector_forward(x, p);
  CHECK(probs == std::vector<double>{0.5, 0.5});
  CHECK(detect_class(x, p) == 0);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    DetectorConfig c;
    c.seed = trial;
    c.n_classes = 2 + trial % 3;
    const auto q = init_detector(c);
    std::vector<double> v(256);
    for (auto& e : v) e = g(rng);
    const auto out = detector_forward(v, q);
    double sum = 0;
    for (double o : out) {
      CHECK(o > 0.0);
      CHECK(o < 1.0);
      sum += o;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
  CHECK_THROWS_AS(detector_forward(std::vector<double>(10), p), DataError);
}

TEST_CASE("forward: one hidden unit toy network") {
  DetectorConfig c;
  c.input_dim = 2;
  c.hidden = {1};
  auto p = init_detector(c);
  p.layers[0].weight = {0.5, -1.0};
  p.layers[0].bias = {0.25};
  p.layers[1].weight = {2.0, -1.0};
  p.layers[1].bias = {0.0, 0.5};
  const std::vector<double> x{3.0, 0.5};
  const double h = std::max(0.0, 0.5 * 3.0 - 1.0 * 0.5 + 0.25);  // 1.25
  const double z0 = 2.0 * h, z1 = -1.0 * h + 0.5;
  const double p0 = 1.0 / (1.0 + std::exp(z1 - z0));
  const auto out = detector_forward(x, p);
  CHECK(out[0] == doctest::Approx(p0).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(1 - p0).epsilon(1e-15));
  p.activation = Activation::kTanh;
  const double ht = std::tanh(1.25);
  const double q0 = 1.0 / (1.0 + std::exp((-ht + 0.5) - 2.0 * ht));
  CHECK(detector_forward(x, p)[0] == doctest::Approx(q0).epsilon(1e-15));
}

TEST_CASE("gradients match central differences") {
  for (Activation act : {Activation::kRelu, Activation::kTanh}) {
    for (bool weighted : {false, true}) {
      DetectorConfig c;
      c.input_dim = 12;
      c.hidden = {7, 9};
      c.n_classes = 3;
      c.activation = act;
      c.seed = 4;
      auto p = init_detector(c);
      std::mt19937_64 rng(5);
      std::normal_distribution<double> g;
      Matrix x(6, 12);
      for (double& v : x.data) v = g(rng);
      const std::vector<int> y{0, 1, 2, 2, 1, 0};
      const std::vector<double> cw = weighted ? std::vector<double>{0.5, 1.5, 1.0} : std::vector<double>{};
      const auto grad = detector_loss_and_gradients(p, x, y, cw);
      auto f = [&] { return detector_loss_and_gradients(p, x, y, cw).loss; };
      for (std::size_t l = 0; l < p.layers.size(); ++l) {
        CHECK(gradcheck::worst_error(p.layers[l].weight, grad.grads[l].weight, f) < 1e-4);
        CHECK(gradcheck::worst_error(p.layers[l].bias, grad.grads[l].bias, f) < 1e-4);
      }
    }
  }
}

TEST_CASE("training: separable clusters, determinism, loss decrease") {
  const auto all = separable_clusters(3000, 256, 2.0, 0.5, 10);
  const auto train = all.slice(0, 2000, "train"), test = all.slice(2000, 1000, "test");
  DetectorConfig c;
  c.epochs = 5;
  c.seed = 3;
  const auto a = train_detector(train, c);
  CHECK(a.loss_history.size() == 5);
  CHECK(a.loss_history.back() < a.loss_history.front());
  CHECK(detector_accuracy(a.params, test) >= 0.99);
  const auto b = train_detector(train, c);
  for (std::size_t l = 0; l < a.params.layers.size(); ++l) CHECK(a.params.layers[l].weight == b.params.layers[l].weight);

  Detector det{a.params, GroupDimension::kGender, train.class_tags};
  Embedding e;
  e.values.assign(test.features.row(0).begin(), test.features.row(0).end());
  CHECK(detect(e, det) == GroupKey::make(GroupDimension::kGender, test.class_tags[test.labels[0]]));
}

TEST_CASE("training: single-class data and class weighting") {
  auto s = small_set(40, 8, 1);
  std::fill(s.labels.begin(), s.labels.end(), 1);
  DetectorConfig c;
  c.input_dim = 8;
  c.epochs = 1;
  CHECK_THROWS_WITH_AS(train_detector(s, c), doctest::Contains("two classes"), DataError);

  auto imbalanced = small_set(60, 8, 2);
  for (std::size_t i = 0; i < imbalanced.size(); i += 3) imbalanced.labels[i] = 0;
  c.class_weighting = true;
  CHECK(train_detector(imbalanced, c).loss_history.size() == 1);
}

TEST_CASE("precision-recall curve") {
  const std::vector<double> sep{0.1, 0.2, 0.3, 0.7, 0.8, 0.9};
  const std::vector<int> lab{0, 0, 0, 1, 1, 1};
  const auto perfect = precision_recall_curve(sep, lab);
  REQUIRE(perfect.size() == 6);
  CHECK(perfect.front().recall == 1.0);
  for (const auto& p : perfect)
    if (p.threshold >= 0.7) CHECK(p.precision == 1.0);
  // Best precision at each attained recall level is 1.
  std::map<double, double> best;
  for (const auto& p : perfect) best[p.recall] = std::max(best[p.recall], p.precision);
  CHECK(best.size() == 3);
  for (const auto& [recall, precision] : best) CHECK(precision == 1.0);

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u;
  std::vector<double> probs(10000);
  std::vector<int> labels(10000);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = u(rng);
    labels[i] = static_cast<int>(i % 2);
  }
  const auto curve = precision_recall_curve(probs, labels);
  double prev_recall = 2.0, prev_threshold = -1.0;
  bool checked = false;
  for (const auto& p : curve) {
    CHECK(p.recall <= prev_recall);
    CHECK(p.threshold > prev_threshold);
    prev_recall = p.recall;
    prev_threshold = p.threshold;
    if (!checked && p.recall <= 0.5) {
      CHECK(std::abs(p.precision - 0.5) < 0.05);
      checked = true;
    }
  }
  // Brute-force confusion counts at a sample of thresholds.
  for (std::size_t k = 0; k < curve.size(); k += 97) {
    std::size_t tp = 0, fp = 0, pos = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      pos += labels[i];
      if (probs[i] >= curve[k].threshold) (labels[i] ? tp : fp)++;
    }
    CHECK(curve[k].precision == static_cast<double>(tp) / (tp + fp));
    CHECK(curve[k].recall == static_cast<double>(tp) / pos);
  }
  CHECK_THROWS_AS(precision_recall_curve(sep, std::vector<int>(6, 1)), DataError);
}

TEST_CASE("detect: argmax, tie rule, monotone transforms of logits") {
  DetectorConfig c;
  c.input_dim = 2;
  c.hidden = {};
  auto p = init_detector(c);
  p.layers[0].weight = {1, 0, 0, 1};
  p.layers[0].bias = {0, 0};
  Detector det{p, GroupDimension::kGender, {"male", "female"}};
  CHECK(detect(Embedding{"a", {2.2f, 0.0f}}, det).value == "male");
  CHECK(detect(Embedding{"b", {0.0f, 2.2f}}, det).value == "female");
  CHECK(detect(Embedding{"c", {1.0f, 1.0f}}, det).value == "male");

  // Scaling and shifting the logit layer uniformly keeps the argmax.
  Detector shifted = det;
  for (double& w : shifted.params.layers[0].weight) w *= 3.0;
  for (double& b : shifted.params.layers[0].bias) b += 5.0;
  std::mt19937_64 rng(7);
  std::normal_distribution<float> g;
  for (int i = 0; i < 50; ++i) {
    const Embedding e{"x", {g(rng), g(rng)}};
    CHECK(detect(e, det) == detect(e, shifted));
  }
}

TEST_CASE("verify with an inferred context") {
  DetectorConfig c;
  c.input_dim = 2;
  c.hidden = {};
  auto p = init_detector(c);
  p.layers[0].weight = {1, 0, 0, 1};
  p.layers[0].bias = {0, 0};
  Detector det{p, GroupDimension::kGender, {"male", "female"}};
  GroupThresholdTable t;
  t.far_target = 0.01;
  t.groups = {{GroupKey::make(GroupDimension::kGender, "female"), 0.9, 0.9, 0, 0, 0, 0},
              {GroupKey::make(GroupDimension::kGender, "male"), 0.1, 0.1, 0, 0, 0, 0}};
  t.single_threshold = 0.9;
  const auto d = verify_inferred(Embedding{"t", {1.0f, 0.2f}}, Embedding{"e", {1.0f, 0.6f}}, det, t);
  CHECK(d.provenance == ContextSource::kInferred);
  CHECK(d.context->value == "male");
  CHECK(d.threshold == 0.1);
  CHECK(d.accept);
}

TEST_CASE("detector parameters survive the named-array container") {
  DetectorConfig c;
  c.seed = 9;
  const auto p = init_detector(c);
  const auto arrays = p.to_named_arrays();
  const auto back = DetectorParams::from_named_arrays(read_named_arrays(write_named_arrays(arrays)), p.activation);
  REQUIRE(back.layers.size() == p.layers.size());
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    CHECK(back.layers[l].weight == p.layers[l].weight);
    CHECK(back.layers[l].bias == p.layers[l].bias);
  }
}
