// include/adaptsv/calibration.hpp

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

// Context-adaptive thresholds: per-group operating points at a common FAR
// target, comparison against a single shared threshold, EER-threshold based
// grade grouping and the verification decision.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adaptsv/embedding.hpp"
#include "adaptsv/scoring.hpp"

namespace adaptsv {

enum class GroupDimension { kGender, kAgeGroup, kCustom };

std::string to_string(GroupDimension d);
GroupDimension parse_group_dimension(const std::string& s);

struct GroupKey {
  GroupDimension dimension = GroupDimension::kCustom;
  std::string value;

  // Throws ConfigError on an empty value.
  static GroupKey make(GroupDimension dimension, std::string value);
  std::string str() const { return to_string(dimension) + ":" + value; }

  auto operator<=>(const GroupKey&) const = default;
};

// Smallest theta among the distinct nontarget scores and the supremum with
// FAR(theta) <= far_target.
double threshold_for_far(const ScoreSet& scores, double far_target);

// Threshold where the piecewise-linear FAR curve of the sweep reaches
// far_target; the continuous reading used when plotting.
double interpolated_threshold_for_far(const ScoreSet& scores, double far_target);

struct GroupThreshold {
  GroupKey key;
  double threshold = 0.0;        // adaptive, discrete-candidate minimal
  double curve_threshold = 0.0;  // interpolated FAR-curve position
  double far = 0.0;              // at threshold
  double frr = 0.0;              // at threshold
  double far_at_single = 0.0;
  double frr_at_single = 0.0;
};

struct GroupThresholdTable {
  double far_target = 0.0;
  std::vector<GroupThreshold> groups;  // ordered by key
  double single_threshold = 0.0;       // max over group thresholds

  const GroupThreshold* find(const GroupKey& key) const;
};

// Throws DataError naming any group that lacks target or nontarget scores.
GroupThresholdTable calibrate_groups(const std::map<GroupKey, ScoreSet>& grouped, double far_target);

struct GroupComparison {
  GroupKey key;
  double threshold_adaptive = 0.0;
  double threshold_single = 0.0;
  double frr_adaptive = 0.0;
  double frr_single = 0.0;
  std::optional<double> increase_pct;   // single over adaptive; unset when adaptive FRR is 0
  std::optional<double> reduction_pct;  // adaptive vs single; unset when single FRR is 0
};

struct CalibrationReport {
  double far_target = 0.0;
  double single_threshold = 0.0;
  std::vector<GroupComparison> groups;
};

// Throws InvariantError if a group misses the FAR target under its own
// threshold or the single threshold is below a group threshold.
CalibrationReport compare_single_vs_adaptive(const GroupThresholdTable& table);

struct EetGrouping {
  std::vector<int> grades;               // ascending
  std::vector<double> eet;               // EER threshold per grade
  double tolerance = 0.0;
  std::vector<std::vector<int>> groups;  // contiguous runs of grades
};

// Greedy left-to-right merge of consecutive grades while the group's EET
// spread stays within the tolerance.
EetGrouping group_by_eet(const std::map<int, ScoreSet>& per_grade, double tolerance);

enum class ContextSource { kPrior, kInferred, kFallback };
std::string to_string(ContextSource s);

enum class ContextFallback { kSingleThreshold, kNone };

struct Decision {
  bool accept = false;
  double score = 0.0;
  double threshold = 0.0;
  std::optional<GroupKey> context;  // the table row used, unset on fallback
  ContextSource provenance = ContextSource::kPrior;
};

// accept iff cosine(test, enrolled) >= theta of the context's row. An
// unknown or absent context uses the single threshold when allowed, else
// throws DataError.
Decision verify(const Embedding& test, const Embedding& enrolled, const std::optional<GroupKey>& context,
                ContextSource source, const GroupThresholdTable& table,
                ContextFallback fallback = ContextFallback::kSingleThreshold);

}  // namespace adaptsv
