// src/calibration.cpp

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

#include "adaptsv/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adaptsv/error.hpp"

namespace adaptsv {

std::string to_string(GroupDimension d) {
  switch (d) {
    case GroupDimension::kGender: return "gender";
    case GroupDimension::kAgeGroup: return "age_group";
    case GroupDimension::kCustom: return "custom";
  }
  return "custom";
}

GroupDimension parse_group_dimension(const std::string& s) {
  if (s == "gender") return GroupDimension::kGender;
  if (s == "age_group") return GroupDimension::kAgeGroup;
  if (s == "custom") return GroupDimension::kCustom;
  throw ConfigError("unknown group dimension '" + s + "' (expected gender, age_group or custom)");
}

GroupKey GroupKey::make(GroupDimension dimension, std::string value) {
  if (value.empty()) throw ConfigError("group key value must be nonempty");
  return GroupKey{dimension, std::move(value)};
}

std::string to_string(ContextSource s) {
  switch (s) {
    case ContextSource::kPrior: return "prior";
    case ContextSource::kInferred: return "inferred";
    case ContextSource::kFallback: return "fallback";
  }
  return "prior";
}

namespace {

void check_far_target(double far_target) {
  if (!(far_target > 0.0 && far_target <= 1.0))
    throw ConfigError("far_target must lie in (0, 1], got " + std::to_string(far_target));
}

}  // namespace

double threshold_for_far(const ScoreSet& scores, double far_target) {
  check_far_target(far_target);
  const auto& non = scores.nontargets();
  if (non.empty()) throw DataError("threshold_for_far: no nontarget scores in '" + scores.group() + "'");
  const double n = static_cast<double>(non.size());
  // FAR at a candidate equal to non[k] (first occurrence) is (n - k) / n and
  // decreases with k, so the first satisfying candidate is the minimum.
  for (std::size_t k = 0; k < non.size(); ++k) {
    if (k > 0 && non[k] == non[k - 1]) continue;
    if ((n - static_cast<double>(k)) / n <= far_target) return non[k];
  }
  return supremum_threshold(non.back());
}

double interpolated_threshold_for_far(const ScoreSet& scores, double far_target) {
  check_far_target(far_target);
  const auto& non = scores.nontargets();
  if (non.empty()) throw DataError("interpolated_threshold_for_far: no nontarget scores");
  // FAR polyline through (non[k], (n-k)/n) and the supremum point.
  const double n = static_cast<double>(non.size());
  double prev_theta = non.front(), prev_far = 1.0;
  if (far_target >= 1.0) return prev_theta;
  for (std::size_t k = 1; k <= non.size(); ++k) {
    if (k < non.size() && non[k] == non[k - 1]) continue;
    const double theta = k < non.size() ? non[k] : supremum_threshold(non.back());
    const double far = (n - static_cast<double>(k)) / n;
    if (far <= far_target) {
      const double t = (prev_far - far_target) / (prev_far - far);
      return prev_theta + t * (theta - prev_theta);
    }
    prev_theta = theta;
    prev_far = far;
  }
  return supremum_threshold(non.back());
}

const GroupThreshold* GroupThresholdTable::find(const GroupKey& key) const {
  for (const auto& g : groups)
    if (g.key == key) return &g;
  return nullptr;
}

GroupThresholdTable calibrate_groups(const std::map<GroupKey, ScoreSet>& grouped, double far_target) {
  check_far_target(far_target);
  if (grouped.empty()) throw DataError("calibrate_groups: no groups");
  GroupThresholdTable table;
  table.far_target = far_target;
  table.single_threshold = -std::numeric_limits<double>::infinity();
  for (const auto& [key, scores] : grouped) {
    if (scores.targets().empty() || scores.nontargets().empty())
      throw DataError("calibrate_groups: group '" + key.str() + "' needs both target and nontarget scores");
    GroupThreshold g;
    g.key = key;
    g.threshold = threshold_for_far(scores, far_target);
    g.curve_threshold = interpolated_threshold_for_far(scores, far_target);
    g.far = far_at(scores, g.threshold);
    g.frr = frr_at(scores, g.threshold);
    table.single_threshold = std::max(table.single_threshold, g.threshold);
    table.groups.push_back(std::move(g));
  }
  for (auto& g : table.groups) {
    const ScoreSet& scores = grouped.at(g.key);
    g.far_at_single = far_at(scores, table.single_threshold);
    g.frr_at_single = frr_at(scores, table.single_threshold);
  }
  return table;
}

CalibrationReport compare_single_vs_adaptive(const GroupThresholdTable& table) {
  CalibrationReport r;
  r.far_target = table.far_target;
  r.single_threshold = table.single_threshold;
  for (const auto& g : table.groups) {
    if (g.far > table.far_target)
      throw InvariantError("group '" + g.key.str() + "' misses the FAR target under its own threshold");
    if (g.threshold > table.single_threshold)
      throw InvariantError("single threshold is below the threshold of group '" + g.key.str() + "'");
    GroupComparison c;
    c.key = g.key;
    c.threshold_adaptive = g.threshold;
    c.threshold_single = table.single_threshold;
    c.frr_adaptive = g.frr;
    c.frr_single = g.frr_at_single;
    if (c.frr_adaptive > 0.0) c.increase_pct = frr_increase_pct(c.frr_adaptive, c.frr_single);
    if (c.frr_single > 0.0) c.reduction_pct = frr_reduction_pct(c.frr_adaptive, c.frr_single);
    r.groups.push_back(std::move(c));
  }
  return r;
}

EetGrouping group_by_eet(const std::map<int, ScoreSet>& per_grade, double tolerance) {
  if (std::isnan(tolerance) || tolerance < 0.0) throw ConfigError("group_by_eet: tolerance must be >= 0");
  if (per_grade.empty()) throw DataError("group_by_eet: no grades");
  EetGrouping out;
  out.tolerance = tolerance;
  for (const auto& [grade, scores] : per_grade) {
    if (scores.targets().empty() || scores.nontargets().empty())
      throw DataError("group_by_eet: grade " + std::to_string(grade) + " needs both target and nontarget scores");
    out.grades.push_back(grade);
    out.eet.push_back(eer(scores).threshold);
  }
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < out.grades.size(); ++i) {
    const double e = out.eet[i];
    if (!out.groups.empty() && std::max(hi, e) - std::min(lo, e) <= tolerance) {
      out.groups.back().push_back(out.grades[i]);
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    } else {
      out.groups.push_back({out.grades[i]});
      lo = hi = e;
    }
  }
  return out;
}

Decision verify(const Embedding& test, const Embedding& enrolled, const std::optional<GroupKey>& context,
                ContextSource source, const GroupThresholdTable& table, ContextFallback fallback) {
  Decision d;
  d.score = cosine_similarity(test.view(), enrolled.view());
  const GroupThreshold* row = context ? table.find(*context) : nullptr;
  if (row) {
    d.threshold = row->threshold;
    d.context = row->key;
    d.provenance = source;
  } else {
    if (fallback == ContextFallback::kNone)
      throw DataError("verify: context '" + (context ? context->str() : std::string("<none>")) +
                      "' not in threshold table and no fallback configured");
    d.threshold = table.single_threshold;
    d.provenance = ContextSource::kFallback;
  }
  d.accept = d.score >= d.threshold;
  return d;
}

}  // namespace adaptsv
