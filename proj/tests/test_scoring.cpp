// tests/test_scoring.cpp

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

#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "adaptsv/error.hpp"
#include "adaptsv/scoring.hpp"
#include "naive_oracle.hpp"

using namespace adaptsv;

namespace {

ScoreSet random_set(std::mt19937_64& rng, std::size_t max_n = 1000) {
  std::uniform_int_distribution<std::size_t> n(1, max_n / 2);
  std::normal_distribution<double> tar(0.6, 0.2), non(0.1, 0.2);
  // Coarse rounding produces ties, which exercise the distinct-score logic.
  const bool ties = rng() % 2;
  auto draw = [&](std::normal_distribution<double>& d) {
    const double v = d(rng);
    return ties ? std::round(v * 50) / 50 : v;
  };
  std::vector<double> t(n(rng)), u(n(rng));
  for (auto& v : t) v = draw(tar);
  for (auto& v : u) v = draw(non);
  return ScoreSet(t, u);
}

Embedding emb(const std::string& id, std::vector<float> v) { return Embedding{id, std::move(v)}; }

}  // namespace

TEST_CASE("cosine similarity examples") {
  const std::vector<float> a{3, 4}, x{1, 0}, y{0, 1}, p{1, 2, 3}, q{4, 5, 6}, z{0, 0};
  CHECK(cosine_similarity(a, a) == doctest::Approx(1.0));
  CHECK(cosine_similarity(x, y) == 0.0);
  CHECK(std::abs(cosine_similarity(p, q) - 0.974632) < 1e-6);
  CHECK_THROWS_WITH_AS(cosine_similarity(z, x), doctest::Contains("degenerate embedding"), DataError);
  CHECK_THROWS_AS(cosine_similarity(p, x), ConfigError);
}

TEST_CASE("cosine similarity: symmetric, scale invariant, bounded") {
  std::mt19937_64 rng(3);
  std::normal_distribution<float> g;
  std::uniform_real_distribution<float> s(0.01f, 100.0f);
  for (int i = 0; i < 100; ++i) {
    std::vector<float> a(16), b(16);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng);
    const double c = cosine_similarity(a, b);
    CHECK(c == cosine_similarity(b, a));
    CHECK(std::abs(c) <= 1.0);
    std::vector<float> a2 = a;
    const float k = s(rng);
    for (auto& v : a2) v *= k;
    CHECK(std::abs(cosine_similarity(a2, b) - c) < 1e-6);
    CHECK(cosine_similarity(a2, a) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("trial scoring: partition, grouping and unresolved ids") {
  EmbeddingStore store;
  store.add(emb("a", {1, 0}));
  store.add(emb("b", {1, 0.1f}));
  store.add(emb("c", {0, 1}));
  store.add(emb("d", {-1, 0.2f}));
  std::vector<TrialPair> trials{{TrialLabel::kTarget, "a", "b", "male"},
                                {TrialLabel::kTarget, "c", "c", "female"},
                                {TrialLabel::kNontarget, "a", "c", "male"},
                                {TrialLabel::kNontarget, "b", "d", "female"}};
  const ScoreSet s = score_trials(trials, store);
  CHECK(s.targets().size() == 2);
  CHECK(s.nontargets().size() == 2);
  const auto grouped = score_trials_grouped(trials, store);
  REQUIRE(grouped.size() == 2);
  CHECK(grouped.at("male").size() + grouped.at("female").size() == 4);
  CHECK(score_pairs(trials, store, Exec::kSerial) == score_pairs(trials, store, Exec::kParallel));

  trials.push_back({TrialLabel::kTarget, "a", "x", std::nullopt});
  CHECK_THROWS_WITH_AS(score_trials(trials, store), "unresolved ids: [x]", DataError);
}

TEST_CASE("FAR and FRR counting") {
  const ScoreSet s({0.5, 0.6}, {0.1, 0.2, 0.3, 0.4});
  CHECK(far_at(s, 0.25) == 0.5);
  CHECK(far_at(s, 0.0) == 1.0);
  CHECK(frr_at(s, 0.0) == 0.0);
  CHECK(far_at(s, 0.4) == 0.25);  // tie accepts
  CHECK(frr_at(s, 0.6) == 0.5);
  const ScoreSet only_targets({0.5}, {});
  CHECK_THROWS_AS(far_at(only_targets, 0.1), DataError);
  CHECK_THROWS_AS(ScoreSet({}, {}), DataError);
  CHECK_THROWS_AS(ScoreSet({NAN}, {0.1}), DataError);
}

TEST_CASE("DET sweep: small examples") {
  const auto c = det_sweep(ScoreSet({0.8}, {0.2}));
  REQUIRE(c.size() == 3);
  CHECK(c[1].threshold == 0.8);
  CHECK(c[1].far == 0.0);
  CHECK(c[1].frr == 0.0);
  CHECK(c[2].far == 0.0);
  CHECK(c[2].frr == 1.0);
  CHECK(det_sweep(ScoreSet({0.3, 0.3}, {0.3})).size() == 2);
  CHECK_THROWS_AS(det_sweep(ScoreSet({0.3}, {})), DataError);
}

TEST_CASE("EER: separated, hand-built crossing, identical distributions") {
  CHECK(eer(ScoreSet({0.9, 0.8}, {0.1, 0.2})).eer == 0.0);

  // At 0.5: FAR 0.5, FRR 0.25. At 0.6: FAR 0.25, FRR 0.5. The segments
  // cross halfway: rate 0.375 at threshold 0.55.
  const ScoreSet s({0.3, 0.5, 0.7, 0.8}, {0.1, 0.2, 0.5, 0.6});
  const auto r = eer(s);
  CHECK(std::abs(r.eer - 0.375) < 1e-9);
  CHECK(std::abs(r.threshold - 0.55) < 1e-9);
  // An exact crossing point is returned as is.
  const auto x = eer(ScoreSet({0.3, 0.5, 0.7, 0.8}, {0.1, 0.2, 0.4, 0.6}));
  CHECK(x.eer == 0.25);
  CHECK(x.threshold == 0.5);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<double> v(1000);
  for (auto& x : v) x = g(rng);
  CHECK(std::abs(eer(ScoreSet(v, v)).eer - 0.5) < 0.05);
}

TEST_CASE("minDCF examples") {
  CHECK(min_dcf(ScoreSet({0.9, 0.8}, {0.1, 0.2}), {}) == 0.0);
  CHECK(min_dcf(ScoreSet({1.0}, {0.0}), {0.05, 1, 1, true}) == 0.0);
  DcfParams bad;
  bad.p_target = 1.0;
  CHECK_THROWS_AS(min_dcf(ScoreSet({1.0}, {0.0}), bad), ConfigError);
}

TEST_CASE("metrics agree with brute-force recounts on random sets") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> th(-0.5, 1.2);
  for (int trial = 0; trial < 40; ++trial) {
    const ScoreSet s = random_set(rng);
    for (int i = 0; i < 100; ++i) {
      const double t = th(rng);
      CHECK(far_at(s, t) == oracle::far(s.nontargets(), t));
      CHECK(frr_at(s, t) == oracle::frr(s.targets(), t));
    }
    const auto curve = det_sweep(s);
    const auto cand = oracle::candidates(s.targets(), s.nontargets());
    REQUIRE(curve.size() == cand.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
      CHECK(curve[i].threshold == cand[i]);
      CHECK(curve[i].far == oracle::far(s.nontargets(), cand[i]));
      CHECK(curve[i].frr == oracle::frr(s.targets(), cand[i]));
      if (i) {
        CHECK(curve[i].far <= curve[i - 1].far);
        CHECK(curve[i].frr >= curve[i - 1].frr);
      }
    }
    const auto e = eer(s);
    CHECK(std::abs(e.eer - oracle::eer(s.targets(), s.nontargets())) < 1e-9);
    CHECK(e.threshold >= cand.front());
    CHECK(e.threshold <= cand.back());
    for (double p : {0.05, 0.01}) {
      const double got = min_dcf(s, {p, 1, 1, true});
      CHECK(std::abs(got - oracle::min_dcf(s.targets(), s.nontargets(), p)) < 1e-12);
      // Never above the cost at the sweep point nearest the EER threshold.
      const auto it = std::lower_bound(cand.begin(), cand.end(), e.threshold);
      const double at = (p * oracle::frr(s.targets(), *it) + (1 - p) * oracle::far(s.nontargets(), *it)) /
                        std::min(p, 1 - p);
      CHECK(got <= at + 1e-12);
    }
  }
}

TEST_CASE("relative FRR change") {
  CHECK(frr_increase_pct(0.013, 0.023) == doctest::Approx(76.923).epsilon(1e-4));
  CHECK(frr_increase_pct(0.012, 0.019) == doctest::Approx(58.333).epsilon(1e-4));
  CHECK(frr_increase_pct(0.021, 0.034) == doctest::Approx(61.905).epsilon(1e-4));
  CHECK_THROWS_WITH_AS(frr_increase_pct(0.0, 0.1), doctest::Contains("undefined relative increase"), DataError);
  CHECK(frr_reduction_pct(0.38, 0.75) == doctest::Approx(49.333).epsilon(1e-4));
}
