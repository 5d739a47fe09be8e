// src/trials.cpp

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

#include "adaptsv/trials.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "adaptsv/error.hpp"

namespace adaptsv {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool blank(std::string_view line) { return split_ws(line).empty(); }

TrialLabel parse_label(std::string_view tok, std::size_t line_no) {
  if (tok == "1") return TrialLabel::kTarget;
  if (tok == "0") return TrialLabel::kNontarget;
  throw ParseError("invalid label at line " + std::to_string(line_no), line_no);
}

}  // namespace

std::vector<TrialPair> parse_trials(std::string_view text) {
  std::vector<TrialPair> trials;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const auto tok = split_ws(lines[i]);
    if (tok.size() != 3)
      throw ParseError("malformed trial at line " + std::to_string(i + 1) + ": expected 'label enroll_id test_id'", i + 1);
    trials.push_back({parse_label(tok[0], i + 1), std::string(tok[1]), std::string(tok[2]), std::nullopt});
  }
  return trials;
}

std::string format_trials(const std::vector<TrialPair>& trials) {
  std::string out;
  for (const auto& t : trials)
    out += (t.label == TrialLabel::kTarget ? "1 " : "0 ") + t.enroll_id + " " + t.test_id + "\n";
  return out;
}

SpeakerMetadata parse_metadata(std::string_view csv) {
  const auto lines = split_lines(csv);
  if (lines.empty()) throw ParseError("metadata: missing header", 1);
  const auto header = split_csv(lines[0]);
  if (header.size() < 3 || header[0] != "speaker_id" || header[1] != "gender" || header[2] != "age_group")
    throw ParseError("metadata: header must be 'speaker_id,gender,age_group'", 1);
  SpeakerMetadata meta;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const auto cells = split_csv(lines[i]);
    if (cells.size() != header.size() || cells[0].empty())
      throw ParseError("metadata: malformed row at line " + std::to_string(i + 1), i + 1);
    if (meta.count(cells[0]))
      throw ParseError("metadata: duplicate speaker '" + cells[0] + "' at line " + std::to_string(i + 1), i + 1);
    auto& keys = meta[cells[0]];
    if (!cells[1].empty()) keys.push_back(GroupKey::make(GroupDimension::kGender, cells[1]));
    if (!cells[2].empty()) keys.push_back(GroupKey::make(GroupDimension::kAgeGroup, cells[2]));
  }
  return meta;
}

std::string format_metadata(const SpeakerMetadata& metadata) {
  std::string out = "speaker_id,gender,age_group\n";
  for (const auto& [spk, keys] : metadata) {
    std::string gender, age;
    for (const auto& k : keys) {
      if (k.dimension == GroupDimension::kGender) gender = k.value;
      if (k.dimension == GroupDimension::kAgeGroup) age = k.value;
    }
    out += spk + "," + gender + "," + age + "\n";
  }
  return out;
}

std::optional<GroupKey> lookup_group(const SpeakerMetadata& metadata, const std::string& speaker,
                                     GroupDimension dimension) {
  auto it = metadata.find(speaker);
  if (it == metadata.end()) return std::nullopt;
  for (const auto& k : it->second)
    if (k.dimension == dimension) return k;
  return std::nullopt;
}

std::string SpeakerIdRule::apply(const std::string& utterance_id) const {
  if (pattern.empty()) return utterance_id.substr(0, utterance_id.find('/'));
  std::regex re;
  try {
    re = std::regex(pattern);
  } catch (const std::regex_error& e) {
    throw ConfigError("invalid speaker-id pattern '" + pattern + "': " + e.what());
  }
  std::smatch m;
  if (!std::regex_search(utterance_id, m, re))
    throw DataError("speaker-id pattern does not match utterance '" + utterance_id + "'");
  return m.size() > 1 ? m[1].str() : m[0].str();
}

GroupJoin join_groups(const std::vector<TrialPair>& trials, const SpeakerMetadata& metadata,
                      GroupDimension dimension, const SpeakerIdRule& rule, UnknownSpeakerPolicy policy) {
  GroupJoin out;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const std::string spk = rule.apply(trials[i].enroll_id);
    const auto key = lookup_group(metadata, spk, dimension);
    if (!key) {
      if (policy == UnknownSpeakerPolicy::kFail)
        throw DataError("no " + to_string(dimension) + " metadata for speaker '" + spk + "' (trial " +
                        std::to_string(i + 1) + ")");
      out.skipped.push_back(i);
      continue;
    }
    TrialPair t = trials[i];
    t.group = key->value;
    out.trials.push_back(std::move(t));
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_scores(const std::vector<ScoredTrial>& scored) {
  std::string out;
  for (const auto& s : scored) {
    out += (s.trial.label == TrialLabel::kTarget ? "1 " : "0 ") + s.trial.enroll_id + " " + s.trial.test_id + " " +
           format_double(s.score);
    if (s.trial.group) out += " " + *s.trial.group;
    out += "\n";
  }
  return out;
}

std::vector<ScoredTrial> parse_scores(std::string_view text) {
  std::vector<ScoredTrial> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const auto tok = split_ws(lines[i]);
    if (tok.size() != 4 && tok.size() != 5)
      throw ParseError("malformed score line " + std::to_string(i + 1) +
                           ": expected 'label enroll_id test_id score [group]'",
                       i + 1);
    ScoredTrial s;
    s.trial.label = parse_label(tok[0], i + 1);
    s.trial.enroll_id = std::string(tok[1]);
    s.trial.test_id = std::string(tok[2]);
    const auto r = std::from_chars(tok[3].data(), tok[3].data() + tok[3].size(), s.score);
    if (r.ec != std::errc() || r.ptr != tok[3].data() + tok[3].size() || !std::isfinite(s.score))
      throw ParseError("invalid score at line " + std::to_string(i + 1), i + 1);
    if (tok.size() == 5) s.trial.group = std::string(tok[4]);
    out.push_back(std::move(s));
  }
  return out;
}

std::map<std::string, ScoreSet> score_sets_from(const std::vector<ScoredTrial>& scored, bool by_group) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> acc;
  for (const auto& s : scored) {
    std::string g = "all";
    if (by_group) {
      if (!s.trial.group) throw DataError("trial " + s.trial.enroll_id + " " + s.trial.test_id + " has no group");
      g = *s.trial.group;
    }
    auto& [tar, non] = acc[g];
    (s.trial.label == TrialLabel::kTarget ? tar : non).push_back(s.score);
  }
  std::map<std::string, ScoreSet> out;
  for (auto& [g, lists] : acc) out.emplace(g, ScoreSet(std::move(lists.first), std::move(lists.second), g));
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_labels_csv(std::string_view csv) {
  const auto lines = split_lines(csv);
  if (lines.empty()) throw ParseError("labels: missing header", 1);
  const auto header = split_csv(lines[0]);
  if (header.size() != 2 || header[0] != "utterance_id" || header[1] != "label")
    throw ParseError("labels: header must be 'utterance_id,label'", 1);
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const auto cells = split_csv(lines[i]);
    if (cells.size() != 2 || cells[0].empty() || cells[1].empty())
      throw ParseError("labels: malformed row at line " + std::to_string(i + 1), i + 1);
    out.emplace_back(cells[0], cells[1]);
  }
  return out;
}

}  // namespace adaptsv
