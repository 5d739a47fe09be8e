// include/adaptsv/scoring.hpp

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

// Trial scoring and detection metrics. Decisions accept iff score >= theta.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adaptsv/containers.hpp"
#include "adaptsv/embedding_model.hpp"

namespace adaptsv {

enum class TrialLabel { kNontarget = 0, kTarget = 1 };

struct TrialPair {
  TrialLabel label = TrialLabel::kNontarget;
  std::string enroll_id;
  std::string test_id;
  std::optional<std::string> group;
};

// Target and nontarget scores, each kept sorted ascending.
class ScoreSet {
 public:
  ScoreSet() = default;
  // Throws DataError on non-finite scores or when both lists are empty.
  ScoreSet(std::vector<double> targets, std::vector<double> nontargets, std::string group = "");

  const std::vector<double>& targets() const { return targets_; }
  const std::vector<double>& nontargets() const { return nontargets_; }
  const std::string& group() const { return group_; }
  std::size_t size() const { return targets_.size() + nontargets_.size(); }

  bool operator==(const ScoreSet&) const = default;

 private:
  std::vector<double> targets_;
  std::vector<double> nontargets_;
  std::string group_;
};

struct DcfParams {
  double p_target = 0.01;
  double c_miss = 1.0;
  double c_fa = 1.0;
  bool normalize = true;

  void validate() const;
};

struct DetPoint {
  double threshold;
  double far;
  double frr;
};
using DetCurve = std::vector<DetPoint>;

struct EerResult {
  double eer;
  double threshold;
};

// Clamped to [-1, 1]. Throws DataError("degenerate embedding") for a zero
// vector and ConfigError for unequal dimensions.
double cosine_similarity(std::span<const float> a, std::span<const float> b);

// Scores in trial order. Throws DataError("unresolved ids: [...]") listing
// every id missing from the store.
std::vector<double> score_pairs(std::span<const TrialPair> trials, const EmbeddingStore& store,
                                Exec exec = Exec::kParallel);
ScoreSet score_trials(std::span<const TrialPair> trials, const EmbeddingStore& store, Exec exec = Exec::kParallel);
// One ScoreSet per group tag; every trial must carry a group.
std::map<std::string, ScoreSet> score_trials_grouped(std::span<const TrialPair> trials, const EmbeddingStore& store,
                                                     Exec exec = Exec::kParallel);
// Partitions precomputed scores (in trial order) by label and group.
std::map<std::string, ScoreSet> partition_scores(std::span<const TrialPair> trials, std::span<const double> scores);

// |{nontarget >= theta}| / |nontarget|
double far_at(const ScoreSet& scores, double theta);
// |{target < theta}| / |target|
double frr_at(const ScoreSet& scores, double theta);

// One point per distinct observed score plus a supremum point just above the
// maximum, where FAR = 0 and FRR = 1.
DetCurve det_sweep(const ScoreSet& scores);

// Linear interpolation on the sweep polyline at the first sign change of
// FAR - FRR; an exact zero is returned directly.
EerResult eer(const ScoreSet& scores);

double min_dcf(const ScoreSet& scores, const DcfParams& params);

// 100 * (other - base) / base. Throws DataError when base is 0.
double frr_increase_pct(double frr_base, double frr_other);
// 100 * (1 - adaptive / single). Throws DataError when single is 0.
double frr_reduction_pct(double frr_adaptive, double frr_single);

// Smallest double strictly above every score; the supremum threshold.
double supremum_threshold(double max_score);

}  // namespace adaptsv
