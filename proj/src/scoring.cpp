// src/scoring.cpp

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

#include "adaptsv/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "adaptsv/error.hpp"
#include "adaptsv/kernels.hpp"

namespace adaptsv {

ScoreSet::ScoreSet(std::vector<double> targets, std::vector<double> nontargets, std::string group)
    : targets_(std::move(targets)), nontargets_(std::move(nontargets)), group_(std::move(group)) {
  if (targets_.empty() && nontargets_.empty()) throw DataError("score set '" + group_ + "' is empty");
  for (const auto* list : {&targets_, &nontargets_})
    for (double s : *list)
      if (!std::isfinite(s)) throw DataError("score set '" + group_ + "' contains a non-finite score");
  std::sort(targets_.begin(), targets_.end());
  std::sort(nontargets_.begin(), nontargets_.end());
}

void DcfParams::validate() const {
  if (!(p_target > 0.0 && p_target < 1.0)) throw ConfigError("dcf: p_target must lie in (0, 1)");
  if (!(c_miss > 0.0 && c_fa > 0.0)) throw ConfigError("dcf: costs must be positive");
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size())
    throw ConfigError("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  const double c = kernels::detail::cosine(a, b);
  if (std::isnan(c)) throw DataError("degenerate embedding: zero vector in cosine similarity");
  return c;
}

std::vector<double> score_pairs(std::span<const TrialPair> trials, const EmbeddingStore& store, Exec exec) {
  std::set<std::string> missing;
  std::vector<kernels::VectorPair> pairs;
  pairs.reserve(trials.size());
  for (const auto& t : trials) {
    const Embedding* e = store.find(t.enroll_id);
    const Embedding* x = store.find(t.test_id);
    if (!e) missing.insert(t.enroll_id);
    if (!x) missing.insert(t.test_id);
    if (e && x) pairs.emplace_back(e->view(), x->view());
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "unresolved ids: [";
    bool first = true;
    for (const auto& id : missing) {
      msg << (first ? "" : ", ") << id;
      first = false;
    }
    msg << "]";
    throw DataError(msg.str());
  }
  std::vector<double> scores(pairs.size());
  if (exec == Exec::kSerial)
    kernels::serial::cosine_batch(pairs, scores);
  else
    kernels::omp::cosine_batch(pairs, scores);
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (std::isnan(scores[i]))
      throw DataError("degenerate embedding in trial " + std::to_string(i + 1) + " (" + trials[i].enroll_id + ", " +
                      trials[i].test_id + ")");
  return scores;
}

ScoreSet score_trials(std::span<const TrialPair> trials, const EmbeddingStore& store, Exec exec) {
  const auto scores = score_pairs(trials, store, exec);
  std::vector<double> tar, non;
  for (std::size_t i = 0; i < trials.size(); ++i)
    (trials[i].label == TrialLabel::kTarget ? tar : non).push_back(scores[i]);
  return ScoreSet(std::move(tar), std::move(non));
}

std::map<std::string, ScoreSet> partition_scores(std::span<const TrialPair> trials, std::span<const double> scores) {
  if (trials.size() != scores.size()) throw ConfigError("partition_scores: trial and score counts differ");
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> parts;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (!trials[i].group) throw DataError("trial " + std::to_string(i + 1) + " has no group tag");
    auto& p = parts[*trials[i].group];
    (trials[i].label == TrialLabel::kTarget ? p.first : p.second).push_back(scores[i]);
  }
  std::map<std::string, ScoreSet> out;
  for (auto& [g, p] : parts) out.emplace(g, ScoreSet(std::move(p.first), std::move(p.second), g));
  return out;
}

std::map<std::string, ScoreSet> score_trials_grouped(std::span<const TrialPair> trials, const EmbeddingStore& store,
                                                     Exec exec) {
  for (std::size_t i = 0; i < trials.size(); ++i)
    if (!trials[i].group) throw DataError("trial " + std::to_string(i + 1) + " has no group tag");
  const auto scores = score_pairs(trials, store, exec);
  return partition_scores(trials, scores);
}

double far_at(const ScoreSet& s, double theta) {
  const auto& non = s.nontargets();
  if (non.empty()) throw DataError("far_at: no nontarget scores in '" + s.group() + "'");
  const auto below = std::lower_bound(non.begin(), non.end(), theta) - non.begin();
  return static_cast<double>(non.size() - static_cast<std::size_t>(below)) / static_cast<double>(non.size());
}

double frr_at(const ScoreSet& s, double theta) {
  const auto& tar = s.targets();
  if (tar.empty()) throw DataError("frr_at: no target scores in '" + s.group() + "'");
  const auto below = std::lower_bound(tar.begin(), tar.end(), theta) - tar.begin();
  return static_cast<double>(below) / static_cast<double>(tar.size());
}

double supremum_threshold(double max_score) {
  return std::nextafter(max_score, std::numeric_limits<double>::infinity());
}

namespace {

void require_both(const ScoreSet& s, const char* op) {
  if (s.targets().empty() || s.nontargets().empty())
    throw DataError(std::string(op) + ": score set '" + s.group() + "' needs both target and nontarget scores");
}

}  // namespace

DetCurve det_sweep(const ScoreSet& s) {
  require_both(s, "det_sweep");
  const auto& tar = s.targets();
  const auto& non = s.nontargets();
  const double n_tar = static_cast<double>(tar.size());
  const double n_non = static_cast<double>(non.size());

  DetCurve curve;
  std::size_t i = 0, j = 0;  // counts of targets / nontargets strictly below theta
  while (i < tar.size() || j < non.size()) {
    double theta;
    if (i == tar.size()) theta = non[j];
    else if (j == non.size()) theta = tar[i];
    else theta = std::min(tar[i], non[j]);
    curve.push_back({theta, (n_non - static_cast<double>(j)) / n_non, static_cast<double>(i) / n_tar});
    while (i < tar.size() && tar[i] == theta) ++i;
    while (j < non.size() && non[j] == theta) ++j;
  }
  const double top = std::max(tar.back(), non.back());
  curve.push_back({supremum_threshold(top), 0.0, 1.0});
  return curve;
}

EerResult eer(const ScoreSet& s) {
  const DetCurve c = det_sweep(s);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double d = c[k].far - c[k].frr;
    if (d == 0.0) return {c[k].far, c[k].threshold};
    if (d < 0.0) {
      // k >= 1: the first point always has FAR = 1, FRR = 0.
      const DetPoint& a = c[k - 1];
      const DetPoint& b = c[k];
      const double da = a.far - a.frr;
      const double t = da / (da - d);
      return {a.far + t * (b.far - a.far), a.threshold + t * (b.threshold - a.threshold)};
    }
  }
  throw InvariantError("eer: sweep never crossed FAR = FRR");
}

double min_dcf(const ScoreSet& s, const DcfParams& params) {
  params.validate();
  const DetCurve c = det_sweep(s);
  const double w_miss = params.c_miss * params.p_target;
  const double w_fa = params.c_fa * (1.0 - params.p_target);
  double best = std::numeric_limits<double>::infinity();
  for (const DetPoint& p : c) best = std::min(best, w_miss * p.frr + w_fa * p.far);
  return params.normalize ? best / std::min(w_miss, w_fa) : best;
}

double frr_increase_pct(double frr_base, double frr_other) {
  if (frr_base == 0.0) throw DataError("undefined relative increase: base FRR is 0");
  return 100.0 * (frr_other - frr_base) / frr_base;
}

double frr_reduction_pct(double frr_adaptive, double frr_single) {
  if (frr_single == 0.0) throw DataError("undefined relative reduction: single-threshold FRR is 0");
  return 100.0 * (1.0 - frr_adaptive / frr_single);
}

}  // namespace adaptsv
