// src/experiment.cpp

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

#include "adaptsv/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <set>

#include <json.hpp>

#include "adaptsv/containers.hpp"
#include "adaptsv/embedding_model.hpp"
#include "adaptsv/error.hpp"
#include "adaptsv/svg_plot.hpp"
#include "adaptsv/wav.hpp"

namespace adaptsv {

using ordered_json = nlohmann::ordered_json;

namespace {

// Re-throws with "<stage>: " prepended, keeping the exception category.
template <class F>
auto staged(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(stage + ": " + e.what(), e.offset());
  } catch (const DataError& e) {
    throw DataError(stage + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(stage + ": " + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(stage + ": " + e.what());
  }
}

bool config_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: '" + key + "' expects true or false, got '" + v + "'");
}

std::vector<int> config_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = v.find(',', start);
    std::string item = v.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    out.push_back(config_int(key, item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string file_safe(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

GroupMetrics metrics_for(const std::string& name, const ScoreSet& s, const std::vector<DcfParams>& dcf) {
  GroupMetrics m;
  m.group = name;
  m.targets = s.targets().size();
  m.nontargets = s.nontargets().size();
  m.eer = eer(s);
  for (const auto& p : dcf) m.min_dcf.push_back(min_dcf(s, p));
  return m;
}

ordered_json metrics_json(const GroupMetrics& m, const std::vector<DcfParams>& dcf) {
  ordered_json j;
  j["targets"] = m.targets;
  j["nontargets"] = m.nontargets;
  j["eer"] = m.eer.eer;
  j["eer_threshold"] = m.eer.threshold;
  j["min_dcf"] = ordered_json::array();
  for (std::size_t i = 0; i < dcf.size(); ++i)
    j["min_dcf"].push_back({{"p_target", dcf[i].p_target}, {"value", m.min_dcf[i]}});
  return j;
}

ordered_json table_json(const GroupThresholdTable& t) {
  ordered_json j;
  j["far_target"] = t.far_target;
  j["groups"] = ordered_json::array();
  for (const auto& g : t.groups)
    j["groups"].push_back({{"dimension", to_string(g.key.dimension)},
                           {"value", g.key.value},
                           {"threshold", g.threshold},
                           {"far", g.far},
                           {"frr", g.frr}});
  j["single_threshold"] = t.single_threshold;
  return j;
}

ordered_json optional_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

ToolConfig parse_tool_config(const std::string& text) {
  ToolConfig c;
  std::map<std::string, std::string> model_keys;
  for (const auto& [key, v] : parse_key_values(text)) {
    if (key.rfind("features.", 0) == 0) {
      const std::string k = key.substr(9);
      auto& f = c.features;
      if (k == "sample_rate") f.sample_rate = config_int(key, v);
      else if (k == "frame_len_ms") f.frame_len_ms = config_double(key, v);
      else if (k == "frame_shift_ms") f.frame_shift_ms = config_double(key, v);
      else if (k == "n_mels") f.n_mels = config_int(key, v);
      else if (k == "fft_size") f.fft_size = config_int(key, v);
      else if (k == "low_freq") f.low_freq = config_double(key, v);
      else if (k == "high_freq") f.high_freq = config_double(key, v);
      else if (k == "preemphasis") f.preemphasis = config_double(key, v);
      else if (k == "dither") f.dither = config_bool(key, v);
      else if (k == "dither_amplitude") f.dither_amplitude = config_double(key, v);
      else if (k == "dither_seed") f.dither_seed = static_cast<std::uint64_t>(config_int(key, v));
      else if (k == "window") f.window = parse_window_type(v);
      else if (k == "energy_floor") f.energy_floor = config_double(key, v);
      else throw ConfigError("config: unknown key '" + key + "'");
    } else if (key.rfind("detector.", 0) == 0) {
      const std::string k = key.substr(9);
      auto& d = c.detector;
      if (k == "input_dim") d.input_dim = config_int(key, v);
      else if (k == "hidden") d.hidden = config_int_list(key, v);
      else if (k == "n_classes") d.n_classes = config_int(key, v);
      else if (k == "activation") d.activation = parse_activation(v);
      else if (k == "learning_rate") d.learning_rate = config_double(key, v);
      else if (k == "batch_size") d.batch_size = config_int(key, v);
      else if (k == "epochs") d.epochs = config_int(key, v);
      else if (k == "class_weighting") d.class_weighting = config_bool(key, v);
      else throw ConfigError("config: unknown key '" + key + "'");
    } else {
      model_keys[key] = v;
    }
  }
  c.model = model_config_from(model_keys);
  c.features.validate();
  c.detector.validate();
  return c;
}

std::string format_tool_config(const ToolConfig& c) {
  std::string out = format_model_config(c.model);
  const auto& f = c.features;
  out += "features.sample_rate = " + std::to_string(f.sample_rate) + "\n";
  out += "features.frame_len_ms = " + format_double(f.frame_len_ms) + "\n";
  out += "features.frame_shift_ms = " + format_double(f.frame_shift_ms) + "\n";
  out += "features.n_mels = " + std::to_string(f.n_mels) + "\n";
  out += "features.fft_size = " + std::to_string(f.fft_size) + "\n";
  out += "features.low_freq = " + format_double(f.low_freq) + "\n";
  out += "features.high_freq = " + format_double(f.high_freq) + "\n";
  out += "features.preemphasis = " + format_double(f.preemphasis) + "\n";
  out += std::string("features.dither = ") + (f.dither ? "true" : "false") + "\n";
  out += "features.window = " + to_string(f.window) + "\n";
  out += "features.energy_floor = " + format_double(f.energy_floor) + "\n";
  const auto& d = c.detector;
  std::string hidden;
  for (std::size_t i = 0; i < d.hidden.size(); ++i) hidden += (i ? "," : "") + std::to_string(d.hidden[i]);
  out += "detector.input_dim = " + std::to_string(d.input_dim) + "\n";
  out += "detector.hidden = " + hidden + "\n";
  out += "detector.n_classes = " + std::to_string(d.n_classes) + "\n";
  out += "detector.activation = " + to_string(d.activation) + "\n";
  out += "detector.learning_rate = " + format_double(d.learning_rate) + "\n";
  out += "detector.batch_size = " + std::to_string(d.batch_size) + "\n";
  out += "detector.epochs = " + std::to_string(d.epochs) + "\n";
  out += std::string("detector.class_weighting = ") + (d.class_weighting ? "true" : "false") + "\n";
  return out;
}

void ExperimentSpec::validate() const {
  if (trials_path.empty()) throw ConfigError("experiment: trials path is required");
  if (embeddings_path.empty() == audio_dir.empty())
    throw ConfigError("experiment: give exactly one of an embeddings file or an audio directory");
  if (far_targets.empty()) throw ConfigError("experiment: at least one FAR target is required");
  for (double f : far_targets)
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("experiment: FAR targets must lie in (0, 1]");
  for (const auto& p : dcf) p.validate();
}

Report run_experiment(const std::vector<TrialPair>& trials, const EmbeddingStore& store,
                      const std::optional<SpeakerMetadata>& metadata, const ExperimentSpec& spec) {
  if (spec.far_targets.empty()) throw ConfigError("experiment: at least one FAR target is required");
  for (double f : spec.far_targets)
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("experiment: FAR targets must lie in (0, 1]");
  if (trials.empty()) throw DataError("experiment: empty trial list");

  Report r;
  r.far_targets = spec.far_targets;
  r.dimension = spec.dimension;
  r.dcf = spec.dcf;
  r.seed = spec.seed;
  r.grouped = metadata.has_value();

  std::vector<TrialPair> used = trials;
  if (metadata) {
    auto join = staged("join", [&] {
      return join_groups(trials, *metadata, spec.dimension, spec.speaker_rule, spec.unknown_speakers);
    });
    used = std::move(join.trials);
    r.skipped = join.skipped.size();
    if (used.empty()) throw DataError("join: no trial could be assigned a group");
  } else {
    for (auto& t : used) t.group = "all";
  }
  r.trials = used.size();

  const auto scores = staged("score", [&] { return score_pairs(used, store, Exec::kParallel); });
  r.score_sets = staged("score", [&] { return partition_scores(used, scores); });

  staged("metrics", [&] {
    std::vector<double> tar, non;
    for (std::size_t i = 0; i < used.size(); ++i)
      (used[i].label == TrialLabel::kTarget ? tar : non).push_back(scores[i]);
    r.pooled = metrics_for("pooled", ScoreSet(tar, non, "pooled"), spec.dcf);
    for (const auto& [g, s] : r.score_sets) {
      r.groups.push_back(metrics_for(g, s, spec.dcf));
      r.det_curves[g] = det_sweep(s);
    }
  });

  std::map<GroupKey, ScoreSet> keyed;
  for (const auto& [g, s] : r.score_sets)
    keyed.emplace(GroupKey::make(metadata ? spec.dimension : GroupDimension::kCustom, g), s);
  for (double far : spec.far_targets) {
    Calibration c;
    c.table = staged("calibrate", [&] { return calibrate_groups(keyed, far); });
    c.comparison = staged("compare", [&] { return compare_single_vs_adaptive(c.table); });
    r.calibrations.push_back(std::move(c));
  }
  return r;
}

EmbeddingStore embed_audio_dir(const std::vector<TrialPair>& trials, const std::string& audio_dir,
                               const FeatureConfig& features, const ParameterSet& params) {
  std::set<std::string> unique;
  for (const auto& t : trials) {
    unique.insert(t.enroll_id);
    unique.insert(t.test_id);
  }
  const std::vector<std::string> ids(unique.begin(), unique.end());
  std::vector<AudioSignal> signals;
  signals.reserve(ids.size());
  for (const auto& id : ids) {
    const std::string path = (std::filesystem::path(audio_dir) / (id + ".wav")).string();
    try {
      signals.push_back(read_wav(path));
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what(), e.offset());
    }
  }
  const auto feats = featurize_batch(signals, ids, features);

  std::vector<Embedding> out(ids.size());
  std::vector<std::string> errors(ids.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ids.size()); ++i) {
    try {
      out[i] = embed(feats[i], params, Exec::kSerial);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  EmbeddingStore store(static_cast<std::size_t>(params.config.embedding_dim));
  store.provenance = params.config.hash();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!errors[i].empty()) throw DataError(ids[i] + ": " + errors[i]);
    store.add(std::move(out[i]));
  }
  return store;
}

Report run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto trials = staged("trials", [&] { return parse_trials(read_text_file(spec.trials_path)); });
  std::optional<SpeakerMetadata> metadata;
  if (!spec.metadata_path.empty())
    metadata = staged("metadata", [&] { return parse_metadata(read_text_file(spec.metadata_path)); });

  EmbeddingStore store;
  if (!spec.embeddings_path.empty()) {
    store = staged("embeddings", [&] { return read_embeddings(read_file_bytes(spec.embeddings_path)); });
  } else {
    store = staged("embed", [&] {
      const ParameterSet params =
          spec.params_path.empty()
              ? init_params(spec.config.model, spec.seed)
              : ParameterSet::from_named_arrays(spec.config.model, read_named_arrays(read_file_bytes(spec.params_path)));
      return embed_audio_dir(trials, spec.audio_dir, spec.config.features, params);
    });
  }
  Report r = run_experiment(trials, store, metadata, spec);
  if (!spec.output_dir.empty()) staged("output", [&] { write_report_files(r, spec.output_dir); });
  return r;
}

std::string Report::to_json() const {
  ordered_json j;
  j["config"] = {{"far_targets", far_targets},
                 {"dimension", grouped ? to_string(dimension) : "none"},
                 {"seed", seed}};
  j["counts"] = {{"trials", trials}, {"skipped", skipped}};

  ordered_json m;
  m["pooled"] = metrics_json(pooled, dcf);
  m["groups"] = ordered_json::object();
  for (const auto& g : groups) m["groups"][g.group] = metrics_json(g, dcf);
  j["metrics"] = m;

  j["calibration"] = ordered_json::array();
  for (const auto& c : calibrations) {
    ordered_json cj;
    cj["table"] = table_json(c.table);
    cj["comparison"] = ordered_json::array();
    for (const auto& g : c.comparison.groups)
      cj["comparison"].push_back({{"dimension", to_string(g.key.dimension)},
                                  {"value", g.key.value},
                                  {"threshold_adaptive", g.threshold_adaptive},
                                  {"threshold_single", g.threshold_single},
                                  {"frr_adaptive", g.frr_adaptive},
                                  {"frr_single", g.frr_single},
                                  {"frr_increase_pct", optional_json(g.increase_pct)},
                                  {"frr_reduction_pct", optional_json(g.reduction_pct)}});
    j["calibration"].push_back(cj);
  }

  j["det_curves"] = ordered_json::object();
  for (const auto& [g, curve] : det_curves) {
    ordered_json pts = ordered_json::array();
    for (const auto& p : curve) pts.push_back({p.threshold, p.far, p.frr});
    j["det_curves"][g] = pts;
  }
  j["score_sets"] = ordered_json::object();
  for (const auto& [g, s] : score_sets) j["score_sets"][g] = {{"targets", s.targets()}, {"nontargets", s.nontargets()}};
  return j.dump(2) + "\n";
}

std::string table_to_json(const GroupThresholdTable& table) { return table_json(table).dump(2) + "\n"; }

GroupThresholdTable table_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    GroupThresholdTable t;
    t.far_target = j.at("far_target").get<double>();
    t.single_threshold = j.at("single_threshold").get<double>();
    for (const auto& g : j.at("groups")) {
      GroupThreshold row;
      row.key = GroupKey::make(parse_group_dimension(g.at("dimension").get<std::string>()),
                               g.at("value").get<std::string>());
      row.threshold = g.at("threshold").get<double>();
      row.curve_threshold = row.threshold;
      row.far = g.at("far").get<double>();
      row.frr = g.at("frr").get<double>();
      t.groups.push_back(std::move(row));
    }
    std::sort(t.groups.begin(), t.groups.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("threshold table: ") + e.what(), 0);
  }
}

std::string det_to_csv(const DetCurve& curve) {
  std::string out = "threshold,far,frr\n";
  for (const auto& p : curve) out += format_double(p.threshold) + "," + format_double(p.far) + "," + format_double(p.frr) + "\n";
  return out;
}

void write_report_files(const Report& report, const std::string& output_dir) {
  std::filesystem::create_directories(output_dir);
  const std::filesystem::path dir(output_dir);
  write_text_file((dir / "report.json").string(), report.to_json());
  for (std::size_t i = 0; i < report.calibrations.size(); ++i) {
    const std::string name = report.calibrations.size() == 1 ? "table.json" : "table_" + std::to_string(i) + ".json";
    write_text_file((dir / name).string(), table_to_json(report.calibrations[i].table));
  }
  for (const auto& [g, curve] : report.det_curves) {
    write_text_file((dir / ("det_" + file_safe(g) + ".csv")).string(), det_to_csv(curve));
    PlotSpec plot;
    plot.title = "FAR/FRR vs threshold: " + g;
    plot.series = det_series(curve);
    write_text_file((dir / ("det_" + file_safe(g) + ".svg")).string(), emit_plot(plot));
  }
}

}  // namespace adaptsv
