// include/adaptsv/experiment.hpp

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

// End-to-end evaluation: load or compute embeddings, score the trial list,
// sweep per group, calibrate and compare, and emit a JSON report.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adaptsv/calibration.hpp"
#include "adaptsv/features.hpp"
#include "adaptsv/group_detector.hpp"
#include "adaptsv/model_config.hpp"
#include "adaptsv/scoring.hpp"
#include "adaptsv/trials.hpp"

namespace adaptsv {

// Everything a "--config" file can set: bare keys configure the model,
// "features.<key>" the frontend and "detector.<key>" the group detector.
struct ToolConfig {
  FeatureConfig features;
  ModelConfig model;
  DetectorConfig detector;
};
ToolConfig parse_tool_config(const std::string& text);
std::string format_tool_config(const ToolConfig& config);

struct ExperimentSpec {
  std::string trials_path;
  std::string embeddings_path;  // EMB1 store; or
  std::string audio_dir;        // <audio_dir>/<utterance_id>.wav
  std::string params_path;      // NAR1 model parameters; random init from seed when empty
  std::string metadata_path;    // empty: a single pooled group
  std::vector<double> far_targets = {0.01};
  GroupDimension dimension = GroupDimension::kGender;
  std::vector<DcfParams> dcf = {{0.05, 1.0, 1.0, true}, {0.01, 1.0, 1.0, true}};
  SpeakerIdRule speaker_rule;
  UnknownSpeakerPolicy unknown_speakers = UnknownSpeakerPolicy::kFail;
  std::string output_dir;
  std::uint64_t seed = 0;
  ToolConfig config;

  void validate() const;
};

struct GroupMetrics {
  std::string group;
  std::size_t targets = 0;
  std::size_t nontargets = 0;
  EerResult eer{};
  std::vector<double> min_dcf;  // parallel to ExperimentSpec::dcf
};

struct Calibration {
  GroupThresholdTable table;
  CalibrationReport comparison;
};

struct Report {
  std::vector<double> far_targets;
  GroupDimension dimension = GroupDimension::kGender;
  bool grouped = false;
  std::vector<DcfParams> dcf;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t skipped = 0;
  GroupMetrics pooled;
  std::vector<GroupMetrics> groups;
  std::vector<Calibration> calibrations;  // parallel to far_targets
  std::map<std::string, ScoreSet> score_sets;
  std::map<std::string, DetCurve> det_curves;

  std::string to_json() const;
};

// In-memory core. Trials are grouped through `metadata` when it is given.
Report run_experiment(const std::vector<TrialPair>& trials, const EmbeddingStore& store,
                      const std::optional<SpeakerMetadata>& metadata, const ExperimentSpec& spec);

// Loads the experiment's input files; errors carry the failing stage as a prefix.
Report run_experiment(const ExperimentSpec& spec);

// Writes report.json, table.json, det_<group>.csv and det_<group>.svg.
void write_report_files(const Report& report, const std::string& output_dir);

std::string table_to_json(const GroupThresholdTable& table);
GroupThresholdTable table_from_json(const std::string& text);
std::string det_to_csv(const DetCurve& curve);

// Embeddings for every utterance referenced by `trials`.
EmbeddingStore embed_audio_dir(const std::vector<TrialPair>& trials, const std::string& audio_dir,
                               const FeatureConfig& features, const ParameterSet& params);

}  // namespace adaptsv
