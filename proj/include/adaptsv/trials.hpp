// include/adaptsv/trials.hpp

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

// Trial lists, speaker metadata, the trial-to-group join and scored-trial
// text files.

#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "adaptsv/calibration.hpp"
#include "adaptsv/scoring.hpp"

namespace adaptsv {

// "label enroll_id test_id" per line, label 1 = target, 0 = nontarget.
// Blank lines are ignored; anything else malformed is a ParseError naming
// the 1-based line.
std::vector<TrialPair> parse_trials(std::string_view text);
std::string format_trials(const std::vector<TrialPair>& trials);

// speaker id -> its group keys, one per dimension with a nonempty cell.
using SpeakerMetadata = std::map<std::string, std::vector<GroupKey>>;

// CSV with header "speaker_id,gender,age_group".
SpeakerMetadata parse_metadata(std::string_view csv);
std::string format_metadata(const SpeakerMetadata& metadata);
std::optional<GroupKey> lookup_group(const SpeakerMetadata& metadata, const std::string& speaker,
                                     GroupDimension dimension);

// Speaker id of an utterance id: the text before the first '/', or with a
// pattern, its first capture group (whole match when it has none).
struct SpeakerIdRule {
  std::string pattern;  // empty: prefix rule

  std::string apply(const std::string& utterance_id) const;
};

enum class UnknownSpeakerPolicy { kSkip, kFail };

struct GroupJoin {
  std::vector<TrialPair> trials;   // with group set to the group value
  std::vector<std::size_t> skipped;  // indices into the input list
};

// Tags each trial with the enrollment speaker's group in `dimension`.
GroupJoin join_groups(const std::vector<TrialPair>& trials, const SpeakerMetadata& metadata,
                      GroupDimension dimension, const SpeakerIdRule& rule, UnknownSpeakerPolicy policy);

struct ScoredTrial {
  TrialPair trial;
  double score = 0.0;
};

// "label enroll_id test_id score [group]"; scores printed round-trip exact.
std::string format_scores(const std::vector<ScoredTrial>& scored);
std::vector<ScoredTrial> parse_scores(std::string_view text);

// Scores of every trial, by group when all trials carry one, else under "all".
std::map<std::string, ScoreSet> score_sets_from(const std::vector<ScoredTrial>& scored, bool by_group);

// "utterance_id,label" CSV with header.
std::vector<std::pair<std::string, std::string>> parse_labels_csv(std::string_view csv);

std::string format_double(double v);

}  // namespace adaptsv
