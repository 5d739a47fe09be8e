// tests/acceptance/acceptance_main.cpp

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

// Acceptance checks. One PASS/FAIL line per criterion; nonzero exit status
// when any criterion fails. A criterion fails both on a wrong result and on
// exceeding its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "adaptsv/am_softmax.hpp"
#include "adaptsv/calibration.hpp"
#include "adaptsv/containers.hpp"
#include "adaptsv/embedding_model.hpp"
#include "adaptsv/experiment.hpp"
#include "adaptsv/group_detector.hpp"
#include "adaptsv/synthetic.hpp"
#include "gradcheck.hpp"
#include "naive_oracle.hpp"

using namespace adaptsv;

namespace {

// Collects failure reasons; a criterion passes when none were recorded.
struct Check {
  std::vector<std::string> failures;
  std::string detail;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
  }
};

int run(int id, const std::string& name, double budget_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= budget_s) c.failures.push_back("time " + std::to_string(secs) + " s over budget");
  const bool ok = c.failures.empty();
  std::printf("%s %d %s (%.3f s, limit %.0f s)%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(), secs, budget_s,
              c.detail.empty() ? "" : " ", c.detail.c_str());
  for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
  return ok ? 0 : 1;
}

ModelConfig reduced_config() {
  ModelConfig c;
  c.basewidth = 8;
  c.scale = 2;
  for (auto& b : c.blocks) b.repeats = 1;
  c.embedding_dim = 16;
  c.n_classes = 10;
  return c;
}

// Batch norm with eps 0 is an exact identity, so cascade values can be
// compared without tolerance for the normalisation.
Res2NetModule zero_module(int scale, int width) {
  Res2NetModule m;
  m.scale = scale;
  for (int i = 1; i < scale; ++i)
    m.subset_convs.push_back({Conv2d::make(width, width, 3, 1, 1, 1), BatchNorm::identity(width, 0.0)});
  return m;
}

void criterion_params(Check& c) {
  const auto n = count_params(ModelConfig{});
  c.detail = "count " + std::to_string(n);
  c.expect(std::abs(static_cast<double>(n) - 7.04e6) <= 0.1 * 7.04e6, "count outside 7.04e6 +/- 10%");
}

void criterion_module(Check& c) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int scale : {2, 4, 8}) {
    const std::string tag = "scale " + std::to_string(scale) + ": ";
    // Zero subset kernels: y1 = x1, everything else 0.
    const int w = 3;
    Tensor3 x(scale * w, 4, 5);
    for (double& v : x.data()) v = u(rng);
    const Tensor3 y = res2net_module_forward(x, zero_module(scale, w));
    for (int ch = 0; ch < scale * w; ++ch)
      for (int h = 0; h < 4; ++h)
        for (int t = 0; t < 5; ++t)
          c.expect(y.at(ch, h, t) == (ch < w ? x.at(ch, h, t) : 0.0), tag + "zero-kernel output");

    // Scalar cascade on 1x1 maps: y2 = k2 x2, yi = ki (xi + y(i-1)).
    Res2NetModule m = zero_module(scale, 1);
    Tensor3 s(scale, 1, 1);
    std::vector<double> k(scale), expect(scale);
    for (int i = 0; i < scale; ++i) {
      s.at(i, 0, 0) = 0.25 * (i + 1);
      k[i] = 0.5 + 0.1 * i;
      if (i >= 1) m.subset_convs[i - 1].conv.weight[4] = k[i];
    }
    expect[0] = s.at(0, 0, 0);
    expect[1] = k[1] * s.at(1, 0, 0);
    for (int i = 2; i < scale; ++i) expect[i] = k[i] * (s.at(i, 0, 0) + expect[i - 1]);
    const Tensor3 out = res2net_module_forward(s, m);
    for (int i = 0; i < scale; ++i)
      c.expect(std::abs(out.at(i, 0, 0) - expect[i]) <= 1e-15 * std::abs(expect[i]), tag + "cascade value");
  }

  ParameterSet p = init_params(reduced_config(), 11);
  for (auto& stage : p.stages)
    for (auto& b : stage) {
      b.reduce.conv.bias.assign(b.reduce.conv.out_channels, 0.05);
      b.expand.bn.running_mean.assign(b.expand.bn.channels(), 0.1);
    }
  std::normal_distribution<double> g(-5.0, 2.0);
  FeatureMatrix f;
  f.frames = 24;
  f.n_mels = 80;
  f.values.resize(f.frames * f.n_mels);
  for (double& v : f.values) v = g(rng);
  const auto fast = embed_values(f, p, Exec::kParallel);
  const auto slow = oracle::embed(f, p);
  double d = 0;
  for (std::size_t i = 0; i < fast.size(); ++i) d = std::max(d, std::abs(fast[i] - slow[i]));
  char buf[64];
  std::snprintf(buf, sizeof buf, "embed max-abs %.2e", d);
  c.detail = buf;
  c.expect(fast.size() == slow.size() && d <= 1e-5, "reduced embed differs from the naive network");
}

ScoreSet random_set(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n(1, 500), quant(0, 2);
  std::normal_distribution<double> t(0.6, 0.2), nt(0.1, 0.2);
  // Some sets are rounded so that ties occur.
  const int q = quant(rng);
  auto draw = [&](std::normal_distribution<double>& d) {
    const double v = d(rng);
    return q == 0 ? v : std::round(v * 50 * q) / (50 * q);
  };
  std::vector<double> tar(n(rng)), non(n(rng));
  for (auto& v : tar) v = draw(t);
  for (auto& v : non) v = draw(nt);
  return ScoreSet(tar, non);
}

void criterion_metrics(Check& c) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(-0.6, 1.3);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const ScoreSet s = random_set(rng);
    const auto cand = oracle::candidates(s.targets(), s.nontargets());
    for (int i = 0; i < 20; ++i) {
      const double t = i % 2 ? th(rng) : cand[rng() % cand.size()];
      c.expect(far_at(s, t) == oracle::far(s.nontargets(), t), "far_at differs");
      c.expect(frr_at(s, t) == oracle::frr(s.targets(), t), "frr_at differs");
    }
    const double e = std::abs(eer(s).eer - oracle::eer(s.targets(), s.nontargets()));
    worst = std::max(worst, e);
    c.expect(e <= 1e-9, "eer differs");
    for (double p : {0.05, 0.01})
      c.expect(std::abs(min_dcf(s, {p, 1, 1, true}) - oracle::min_dcf(s.targets(), s.nontargets(), p)) <= 1e-12,
               "min_dcf differs");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst eer diff %.1e", worst);
  c.detail = buf;
}

void criterion_arithmetic(Check& c) {
  struct Case {
    double got, want;
    const char* what;
  };
  const Case cases[] = {
      {frr_increase_pct(0.013, 0.023), 76.9, "increase 0.013 -> 0.023"},
      {frr_increase_pct(0.012, 0.019), 58.3, "increase 0.012 -> 0.019"},
      {frr_increase_pct(0.021, 0.034), 61.9, "increase 0.021 -> 0.034"},
      {frr_increase_pct(0.023, 0.038), 65.2, "increase 0.023 -> 0.038"},
      {frr_reduction_pct(0.38, 0.75), 49.3, "reduction 0.75 -> 0.38"},
      {frr_reduction_pct(0.08, 0.83), 90.4, "reduction 0.83 -> 0.08"},
  };
  std::string detail;
  for (const auto& k : cases) {
    c.expect(std::abs(k.got - k.want) <= 0.1, k.what);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.2f", detail.empty() ? "" : " ", k.got);
    detail += buf;
  }
  c.detail = detail;
}

void criterion_dominance(Check& c) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> groups(2, 5);
  std::uniform_real_distribution<double> shift(-0.3, 0.3);
  const double targets[] = {0.001, 0.01, 0.05, 0.1, 0.3};
  for (int cohort = 0; cohort < 100; ++cohort) {
    std::map<GroupKey, ScoreSet> grouped;
    const int k = groups(rng);
    for (int i = 0; i < k; ++i) {
      const ScoreSet base = random_set(rng);
      const double d = shift(rng);
      auto tar = base.targets(), non = base.nontargets();
      for (auto& v : tar) v += d;
      for (auto& v : non) v += d;
      grouped.emplace(GroupKey::make(GroupDimension::kCustom, "g" + std::to_string(i)), ScoreSet(tar, non));
    }
    const double target = targets[cohort % 5];
    const auto table = calibrate_groups(grouped, target);
    double max_threshold = -INFINITY;
    for (const auto& row : table.groups) {
      const ScoreSet& s = grouped.at(row.key);
      max_threshold = std::max(max_threshold, row.threshold);
      c.expect(frr_at(s, row.threshold) <= frr_at(s, table.single_threshold), "adaptive FRR above single FRR");
      c.expect(oracle::far(s.nontargets(), row.threshold) <= target, "adaptive threshold misses the FAR target");
      // Minimal: no smaller candidate also meets the target.
      std::set<double> cand(s.nontargets().begin(), s.nontargets().end());
      cand.insert(supremum_threshold(*cand.rbegin()));
      c.expect(cand.count(row.threshold) == 1, "threshold is not a candidate");
      for (double t : cand)
        if (t < row.threshold) c.expect(oracle::far(s.nontargets(), t) > target, "a smaller candidate meets the target");
    }
    c.expect(table.single_threshold == max_threshold, "single threshold is not the group maximum");
  }
}

void criterion_gradients(Check& c) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  double worst = 0;
  for (int trial = 0; trial < 3; ++trial) {
    Matrix x(4, 8), w(5, 8);
    for (double& v : x.data) v = g(rng);
    for (double& v : w.data) v = g(rng);
    for (std::size_t r = 0; r < w.rows; ++r) {
      double n = 0;
      for (double v : w.row(r)) n += v * v;
      for (double& v : w.row(r)) v /= std::sqrt(n);
    }
    const std::vector<int> y{0, 3, 4, 3};
    const auto res = am_softmax_loss(x, y, w, 0.2, 30.0);
    auto f = [&] { return am_softmax_loss(x, y, w, 0.2, 30.0).loss; };
    worst = std::max(worst, gradcheck::worst_error(x.data, res.grad_embeddings.data, f));
    worst = std::max(worst, gradcheck::worst_error(w.data, res.grad_weights.data, f));
  }
  for (Activation act : {Activation::kRelu, Activation::kTanh}) {
    DetectorConfig dc;
    dc.input_dim = 16;
    dc.hidden = {8, 12};
    dc.activation = act;
    dc.seed = 7;
    auto p = init_detector(dc);
    Matrix x(8, 16);
    for (double& v : x.data) v = g(rng);
    const std::vector<int> y{0, 1, 1, 0, 1, 0, 0, 1};
    const auto grad = detector_loss_and_gradients(p, x, y);
    auto f = [&] { return detector_loss_and_gradients(p, x, y).loss; };
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
      worst = std::max(worst, gradcheck::worst_error(p.layers[l].weight, grad.grads[l].weight, f));
      worst = std::max(worst, gradcheck::worst_error(p.layers[l].bias, grad.grads[l].bias, f));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst relative error %.2e", worst);
  c.detail = buf;
  c.expect(worst < 1e-4, "gradient mismatch");
}

void criterion_detector(Check& c) {
  const auto all = separable_clusters(3000, 256, 2.0, 0.5, 10);
  const auto train = all.slice(0, 2000, "train"), test = all.slice(2000, 1000, "test");
  DetectorConfig dc;
  dc.epochs = 50;
  dc.seed = 1;
  const auto trained = train_detector(train, dc);
  const double acc = detector_accuracy(trained.params, test);
  char buf[64];
  std::snprintf(buf, sizeof buf, "test accuracy %.4f after %zu epochs", acc, trained.loss_history.size());
  c.detail = buf;
  c.expect(acc >= 0.99, "accuracy below 0.99");

  // Perfectly separated probabilities: best precision at every recall level is 1.
  std::vector<double> probs;
  std::vector<int> labels;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> lo(0.0, 0.45), hi(0.55, 1.0);
  for (int i = 0; i < 500; ++i) {
    labels.push_back(i % 2);
    probs.push_back(i % 2 ? hi(rng) : lo(rng));
  }
  std::map<double, double> best;
  for (const auto& p : precision_recall_curve(probs, labels)) best[p.recall] = std::max(best[p.recall], p.precision);
  for (const auto& [recall, precision] : best) c.expect(precision == 1.0, "precision below 1 at some recall");
  c.expect(best.count(1.0) == 1, "recall 1 missing");
}

void criterion_asp(Check& c) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> dim(1, 32), frames(1, 200);
  std::normal_distribution<double> g(0, 2);
  std::uniform_real_distribution<double> eps(1e-8, 1e-3);
  for (int trial = 0; trial < 100; ++trial) {
    AttentiveStatsPooling asp;
    asp.channels = dim(rng);
    asp.hidden = dim(rng);
    asp.eps = trial % 2 ? 1e-5 : eps(rng);
    asp.w1.resize(asp.channels * asp.hidden);
    asp.b1.resize(asp.hidden);
    asp.v.resize(asp.hidden);
    for (auto* v : {&asp.w1, &asp.b1, &asp.v})
      for (double& x : *v) x = g(rng);
    asp.c = g(rng);
    Matrix f(asp.channels, frames(rng));
    for (double& x : f.data) x = g(rng);
    const auto out = asp_pool(f, asp);
    double sum = 0;
    for (double a : out.attention) sum += a;
    c.expect(std::abs(sum - 1.0) <= 1e-9, "attention weights do not sum to 1");

    Matrix same(asp.channels, f.cols);
    for (std::size_t r = 0; r < same.rows; ++r)
      for (std::size_t t = 0; t < same.cols; ++t) same(r, t) = f(r, 0);
    const auto flat = asp_pool(same, asp);
    for (int ch = 0; ch < asp.channels; ++ch)
      c.expect(flat.pooled[asp.channels + ch] == std::sqrt(asp.eps), "constant-input sigma is not sqrt(eps)");
  }
}

EmbeddingStore random_store(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(0, 10), dim(1, 64), len(1, 40), ch(32, 126);
  std::normal_distribution<float> g;
  EmbeddingStore s;
  const int n = count(rng), d = dim(rng);
  while (static_cast<int>(s.size()) < n) {
    std::string id;
    for (int i = len(rng); i > 0; --i) id += static_cast<char>(ch(rng));
    if (s.contains(id)) continue;
    Embedding e{id, std::vector<float>(d)};
    for (auto& v : e.values) v = g(rng);
    s.add(std::move(e));
  }
  return s;
}

void criterion_determinism(Check& c) {
  CohortSpec cs;
  cs.seed = 9;
  ExperimentSpec spec;
  spec.seed = 9;
  spec.far_targets = {0.01, 0.05};
  const auto a = generate_cohort(cs);
  const auto b = generate_cohort(cs);
  const std::string ra = run_experiment(a.trials, a.store, a.metadata, spec).to_json();
  const std::string rb = run_experiment(b.trials, b.store, b.metadata, spec).to_json();
  c.expect(ra == rb, "reports differ between runs");
  c.detail = "report " + std::to_string(ra.size()) + " bytes";

  std::mt19937_64 rng(10);
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_store(rng);
    const auto bytes = write_embeddings(s);
    c.expect(read_embeddings(bytes) == s, "EMB1 round trip changed the store");
    c.expect(write_embeddings(read_embeddings(bytes)) == bytes, "EMB1 re-encoding differs");
  }
}

}  // namespace

int main() {
  int failed = 0;
  failed += run(1, "parameter count of the full configuration", 1, criterion_params);
  failed += run(2, "multi-scale module semantics and reduced embed vs naive network", 30, criterion_module);
  failed += run(3, "metric oracle equivalence on 200 random sets", 60, criterion_metrics);
  failed += run(4, "relative FRR arithmetic", 1, criterion_arithmetic);
  failed += run(5, "calibration dominance and minimality on 100 cohorts", 60, criterion_dominance);
  failed += run(6, "AM-Softmax and detector gradient checks", 30, criterion_gradients);
  failed += run(7, "detector end-to-end and PR precision", 60, criterion_detector);
  failed += run(8, "attentive pooling invariants on 100 configurations", 10, criterion_asp);
  failed += run(9, "report determinism and EMB1 round trips", 60, criterion_determinism);
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
