// tools/adaptsv_cli.cpp

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

// adaptsv: command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
// violation.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "adaptsv/calibration.hpp"
#include "adaptsv/containers.hpp"
#include "adaptsv/embedding_model.hpp"
#include "adaptsv/error.hpp"
#include "adaptsv/experiment.hpp"
#include "adaptsv/features.hpp"
#include "adaptsv/group_detector.hpp"
#include "adaptsv/scoring.hpp"
#include "adaptsv/svg_plot.hpp"
#include "adaptsv/synthetic.hpp"
#include "adaptsv/trials.hpp"
#include "adaptsv/wav.hpp"

using namespace adaptsv;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string config_path;
  std::string output_dir = ".";
};

ToolConfig load_config(const Globals& g) {
  if (g.config_path.empty()) return ToolConfig{};
  return parse_tool_config(read_text_file(g.config_path));
}

std::string out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.output_dir);
  return (fs::path(g.output_dir) / name).string();
}

std::string dcf_label(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "minDCF(p=%.2f)", p);
  return buf;
}

void print_metrics(const std::string& name, const ScoreSet& s) {
  const auto e = eer(s);
  std::printf("%-12s targets=%zu nontargets=%zu EER=%.4f%% (threshold %.4f) %s=%.4f %s=%.4f\n", name.c_str(),
              s.targets().size(), s.nontargets().size(), 100.0 * e.eer, e.threshold, dcf_label(0.05).c_str(),
              min_dcf(s, {0.05, 1, 1, true}), dcf_label(0.01).c_str(), min_dcf(s, {0.01, 1, 1, true}));
}

// ---- featurize -------------------------------------------------------------

struct FeaturizeArgs {
  std::string wav, out, id;
};

int cmd_featurize(const Globals& g, const FeaturizeArgs& a) {
  const ToolConfig cfg = load_config(g);
  const auto signal = read_wav(a.wav);
  const std::string id = a.id.empty() ? fs::path(a.wav).stem().string() : a.id;
  const auto fm = featurize(signal, cfg.features, id);
  NamedArray arr{"features", {static_cast<std::uint32_t>(fm.frames), static_cast<std::uint32_t>(fm.n_mels)}, {}};
  arr.values.assign(fm.values.begin(), fm.values.end());
  const std::vector<NamedArray> arrays{arr};
  const std::string out = a.out.empty() ? out_path(g, id + ".feats") : a.out;
  write_file_bytes(out, write_named_arrays(arrays));
  std::printf("%s: %zu frames x %d mels -> %s (config %s)\n", id.c_str(), fm.frames, fm.n_mels, out.c_str(),
              fm.config_hash.c_str());
  return 0;
}

// ---- embed -----------------------------------------------------------------

struct EmbedArgs {
  std::string trials, audio_dir, params, out, save_params;
};

int cmd_embed(const Globals& g, const EmbedArgs& a) {
  const ToolConfig cfg = load_config(g);
  const auto trials = parse_trials(read_text_file(a.trials));
  const ParameterSet params = a.params.empty()
                                  ? init_params(cfg.model, g.seed)
                                  : ParameterSet::from_named_arrays(cfg.model, read_named_arrays(read_file_bytes(a.params)));
  if (!a.save_params.empty()) write_file_bytes(a.save_params, write_named_arrays(params.to_named_arrays()));
  const auto store = embed_audio_dir(trials, a.audio_dir, cfg.features, params);
  const std::string out = a.out.empty() ? out_path(g, "embeddings.emb") : a.out;
  write_file_bytes(out, write_embeddings(store));
  std::printf("embedded %zu utterances (dim %zu, model %s) -> %s\n", store.size(), store.dim(),
              store.provenance.c_str(), out.c_str());
  return 0;
}

// ---- score -----------------------------------------------------------------

struct ScoreArgs {
  std::string trials, embeddings, metadata, dimension = "gender", speaker_regex, out;
  bool skip_unknown = false;
};

int cmd_score(const Globals& g, const ScoreArgs& a) {
  auto trials = parse_trials(read_text_file(a.trials));
  if (!a.metadata.empty()) {
    const auto meta = parse_metadata(read_text_file(a.metadata));
    auto join = join_groups(trials, meta, parse_group_dimension(a.dimension), SpeakerIdRule{a.speaker_regex},
                            a.skip_unknown ? UnknownSpeakerPolicy::kSkip : UnknownSpeakerPolicy::kFail);
    if (!join.skipped.empty()) std::fprintf(stderr, "skipped %zu trials with unknown speakers\n", join.skipped.size());
    trials = std::move(join.trials);
  }
  const auto store = read_embeddings(read_file_bytes(a.embeddings));
  const auto scores = score_pairs(trials, store);
  std::vector<ScoredTrial> scored;
  for (std::size_t i = 0; i < trials.size(); ++i) scored.push_back({trials[i], scores[i]});
  const std::string out = a.out.empty() ? out_path(g, "scores.txt") : a.out;
  write_text_file(out, format_scores(scored));
  std::printf("scored %zu trials -> %s\n", scored.size(), out.c_str());
  return 0;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string scores;
  bool by_group = false;
};

int cmd_sweep(const Globals& g, const SweepArgs& a) {
  const auto sets = score_sets_from(parse_scores(read_text_file(a.scores)), a.by_group);
  for (const auto& [name, s] : sets) {
    const auto curve = det_sweep(s);
    write_text_file(out_path(g, "det_" + name + ".csv"), det_to_csv(curve));
    PlotSpec plot;
    plot.title = "FAR/FRR vs threshold: " + name;
    plot.series = det_series(curve);
    write_text_file(out_path(g, "det_" + name + ".svg"), emit_plot(plot));
    print_metrics(name, s);
  }
  return 0;
}

// ---- calibrate -------------------------------------------------------------

struct CalibrateArgs {
  std::string scores, dimension = "gender";
  double far = 0.01;
};

int cmd_calibrate(const Globals& g, const CalibrateArgs& a) {
  const auto sets = score_sets_from(parse_scores(read_text_file(a.scores)), true);
  std::map<GroupKey, ScoreSet> keyed;
  const auto dim = parse_group_dimension(a.dimension);
  for (const auto& [name, s] : sets) keyed.emplace(GroupKey::make(dim, name), s);
  const auto table = calibrate_groups(keyed, a.far);
  const auto report = compare_single_vs_adaptive(table);
  const std::string out = out_path(g, "table.json");
  write_text_file(out, table_to_json(table));
  std::printf("FAR target %.4g, single threshold %.4f\n", table.far_target, table.single_threshold);
  for (const auto& c : report.groups) {
    std::printf("  %-16s theta=%.4f FRR=%.4f | single: FRR=%.4f", c.key.str().c_str(), c.threshold_adaptive,
                c.frr_adaptive, c.frr_single);
    if (c.increase_pct) std::printf("  increase %.1f%%", *c.increase_pct);
    if (c.reduction_pct) std::printf("  reduction %.1f%%", *c.reduction_pct);
    std::printf("\n");
  }
  std::printf("table -> %s\n", out.c_str());
  return 0;
}

// ---- train-detector / detect -----------------------------------------------

struct TrainArgs {
  std::string embeddings, labels, test_embeddings, test_labels, dimension = "gender", out = "detector";
};

LabeledEmbeddingSet labeled_set(const std::string& emb_path, const std::string& labels_path,
                                std::vector<std::string> tags) {
  const auto store = read_embeddings(read_file_bytes(emb_path));
  const auto labels = parse_labels_csv(read_text_file(labels_path));
  if (tags.empty()) {
    std::set<std::string> unique;
    for (const auto& [id, l] : labels) unique.insert(l);
    tags.assign(unique.begin(), unique.end());
  }
  LabeledEmbeddingSet set;
  set.class_tags = tags;
  set.features = Matrix(labels.size(), store.dim());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& e = store.at(labels[i].first);
    for (std::size_t d = 0; d < store.dim(); ++d) set.features(i, d) = e.values[d];
    const auto it = std::find(tags.begin(), tags.end(), labels[i].second);
    if (it == tags.end()) throw DataError("label '" + labels[i].second + "' was not seen in training");
    set.labels.push_back(static_cast<int>(it - tags.begin()));
    set.ids.push_back(labels[i].first);
  }
  return set;
}

Detector load_detector(const std::string& prefix) {
  const auto meta = nlohmann::json::parse(read_text_file(prefix + ".json"));
  Detector d;
  d.dimension = parse_group_dimension(meta.at("dimension").get<std::string>());
  d.class_tags = meta.at("class_tags").get<std::vector<std::string>>();
  d.params = DetectorParams::from_named_arrays(read_named_arrays(read_file_bytes(prefix + ".nar")),
                                               parse_activation(meta.at("activation").get<std::string>()));
  return d;
}

int cmd_train_detector(const Globals& g, const TrainArgs& a) {
  ToolConfig cfg = load_config(g);
  auto train = labeled_set(a.embeddings, a.labels, {});
  DetectorConfig dc = cfg.detector;
  dc.seed = g.seed;
  dc.input_dim = static_cast<int>(train.features.cols);
  dc.n_classes = static_cast<int>(train.class_tags.size());
  const auto result = train_detector(train, dc);
  std::printf("trained %zu samples, %d classes, %llu parameters; loss %.6f -> %.6f; train accuracy %.4f\n",
              train.size(), dc.n_classes, static_cast<unsigned long long>(result.params.count()),
              result.loss_history.front(), result.loss_history.back(), detector_accuracy(result.params, train));

  if (!a.test_embeddings.empty()) {
    const auto test = labeled_set(a.test_embeddings, a.test_labels, train.class_tags);
    std::printf("test accuracy %.4f on %zu samples\n", detector_accuracy(result.params, test), test.size());
    if (dc.n_classes == 2) {
      std::vector<double> probs;
      for (std::size_t i = 0; i < test.size(); ++i) probs.push_back(detector_forward(test.features.row(i), result.params)[1]);
      PlotSpec plot;
      plot.title = "Precision-recall: " + train.class_tags[1];
      plot.x_label = "recall";
      plot.y_label = "precision";
      plot.series = {pr_series(precision_recall_curve(probs, test.labels))};
      write_text_file(out_path(g, "pr_curve.svg"), emit_plot(plot));
    }
  }

  const std::string prefix = out_path(g, a.out);
  write_file_bytes(prefix + ".nar", write_named_arrays(result.params.to_named_arrays()));
  nlohmann::ordered_json meta;
  meta["dimension"] = a.dimension;
  meta["class_tags"] = train.class_tags;
  meta["activation"] = to_string(dc.activation);
  meta["hidden"] = dc.hidden;
  meta["loss_history"] = result.loss_history;
  write_text_file(prefix + ".json", meta.dump(2) + "\n");
  std::printf("detector -> %s.{nar,json}\n", prefix.c_str());
  return 0;
}

struct DetectArgs {
  std::string embeddings, detector, trials, table;
  bool no_fallback = false;
};

int cmd_detect(const Globals&, const DetectArgs& a) {
  const auto store = read_embeddings(read_file_bytes(a.embeddings));
  const auto det = load_detector(a.detector);
  if (a.trials.empty()) {
    std::printf("utterance_id,%s\n", to_string(det.dimension).c_str());
    for (const auto& [id, e] : store.items()) std::printf("%s,%s\n", id.c_str(), detect(e, det).value.c_str());
    return 0;
  }
  if (a.table.empty()) throw ConfigError("detect: --trials requires --table");
  const auto table = table_from_json(read_text_file(a.table));
  const auto fallback = a.no_fallback ? ContextFallback::kNone : ContextFallback::kSingleThreshold;
  for (const auto& t : parse_trials(read_text_file(a.trials))) {
    const auto d = verify_inferred(store.at(t.test_id), store.at(t.enroll_id), det, table, fallback);
    std::printf("%s %s %s %.6f %.6f %s %s\n", t.enroll_id.c_str(), t.test_id.c_str(), d.accept ? "accept" : "reject",
                d.score, d.threshold, d.context ? d.context->str().c_str() : "-", to_string(d.provenance).c_str());
  }
  return 0;
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
  ExperimentSpec spec;
  std::string dimension = "gender";
  bool skip_unknown = false;
  bool synthetic = false;
};

int cmd_run(const Globals& g, RunArgs a) {
  auto& spec = a.spec;
  spec.seed = g.seed;
  spec.output_dir = g.output_dir;
  spec.dimension = parse_group_dimension(a.dimension);
  spec.unknown_speakers = a.skip_unknown ? UnknownSpeakerPolicy::kSkip : UnknownSpeakerPolicy::kFail;
  spec.config = load_config(g);

  Report r;
  if (a.synthetic) {
    CohortSpec cs;
    cs.seed = g.seed;
    const auto cohort = generate_cohort(cs);
    fs::create_directories(g.output_dir);
    write_text_file(out_path(g, "trials.txt"), format_trials(cohort.trials));
    write_text_file(out_path(g, "metadata.csv"), format_metadata(cohort.metadata));
    write_file_bytes(out_path(g, "embeddings.emb"), write_embeddings(cohort.store));
    r = run_experiment(cohort.trials, cohort.store, cohort.metadata, spec);
    write_report_files(r, g.output_dir);
  } else {
    r = run_experiment(spec);
  }
  for (const auto& [name, s] : r.score_sets) print_metrics(name, s);
  for (const auto& c : r.calibrations) {
    std::printf("FAR %.4g: single threshold %.4f\n", c.table.far_target, c.table.single_threshold);
    for (const auto& gc : c.comparison.groups)
      std::printf("  %-16s adaptive %.4f (FRR %.4f)  single FRR %.4f\n", gc.key.str().c_str(), gc.threshold_adaptive,
                  gc.frr_adaptive, gc.frr_single);
  }
  std::printf("report -> %s\n", (fs::path(g.output_dir) / "report.json").string().c_str());
  return 0;
}

// ---- param-count -----------------------------------------------------------

int cmd_param_count(const Globals& g, int frames) {
  const ToolConfig cfg = load_config(g);
  const auto n = count_params(cfg.model, false);
  const auto with_cls = count_params(cfg.model, true);
  std::printf("embedding network: %llu parameters (%.3f M)\n", static_cast<unsigned long long>(n), n / 1e6);
  std::printf("  reference figure 7.04 M; relative difference %+.2f%%\n", 100.0 * (n - 7.04e6) / 7.04e6);
  std::printf("  with AM-Softmax class matrix (%d x %d): %llu\n", cfg.model.n_classes, cfg.model.embedding_dim,
              static_cast<unsigned long long>(with_cls));
  std::printf("multiply-accumulates for %d input frames: %.3f G\n", frames,
              static_cast<double>(count_macs(cfg.model, frames)) / 1e9);
  std::printf("  (the 8 G reference figure does not state its input duration)\n");
  const auto d = count_detector_params(cfg.detector);
  std::printf("group detector: %llu parameters\n", static_cast<unsigned long long>(d));
  std::printf("  reference figure 67,716; the stated 256-128-256-2 topology with biases gives 66,434\n");
  return 0;
}

// ---- selftest --------------------------------------------------------------

int cmd_selftest(const Globals& g) {
  int failures = 0;
  auto check = [&](bool ok, const char* what) {
    std::printf("%s %s\n", ok ? "ok  " : "FAIL", what);
    if (!ok) ++failures;
  };

  check(count_params(ModelConfig{}) == 6842977ull, "embedding network parameter count");
  check(count_detector_params(DetectorConfig{}) == 66434ull, "detector parameter count");

  AudioSignal tone;
  tone.sample_rate = 16000;
  for (int i = 0; i < 16000; ++i) tone.samples.push_back(0.1 * std::sin(2 * M_PI * 1000.0 * i / 16000.0));
  const auto wav = parse_wav(encode_wav(tone));
  const auto fm = featurize(wav, FeatureConfig{});
  check(fm.frames == 98 && fm.n_mels == 80, "featurize 1 s -> 98 x 80");

  CohortSpec cs;
  cs.seed = g.seed;
  cs.speakers_per_group = 12;
  const auto cohort = generate_cohort(cs);
  ExperimentSpec spec;
  spec.seed = g.seed;
  const auto a = run_experiment(cohort.trials, cohort.store, cohort.metadata, spec).to_json();
  const auto b = run_experiment(cohort.trials, cohort.store, cohort.metadata, spec).to_json();
  check(a == b, "experiment report is deterministic");
  check(read_embeddings(write_embeddings(cohort.store)) == cohort.store, "EMB1 round trip");

  const ScoreSet s({0.9, 0.8}, {0.1, 0.2});
  check(eer(s).eer == 0.0 && min_dcf(s, {}) == 0.0, "separated scores give zero EER and minDCF");

  std::printf("%s\n", failures ? "selftest FAILED" : "selftest passed");
  return failures ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speaker verification scoring and context-adaptive thresholds"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--config", g.config_path, "Key/value config file (model, features.*, detector.*)");
  app.add_option("--output-dir", g.output_dir, "Directory for written files")->capture_default_str();

  FeaturizeArgs fa;
  auto* featurize_cmd = app.add_subcommand("featurize", "Log-mel filterbank features of one WAV file");
  featurize_cmd->add_option("--wav", fa.wav, "Input WAV (PCM16 mono)")->required();
  featurize_cmd->add_option("--out", fa.out, "Output named-array file");
  featurize_cmd->add_option("--id", fa.id, "Utterance id (default: file stem)");

  EmbedArgs ea;
  auto* embed_cmd = app.add_subcommand("embed", "Embed every utterance of a trial list");
  embed_cmd->add_option("--trials", ea.trials, "Trial list")->required();
  embed_cmd->add_option("--audio-dir", ea.audio_dir, "Directory holding <utterance_id>.wav")->required();
  embed_cmd->add_option("--params", ea.params, "Model parameters (named arrays); random init from --seed if absent");
  embed_cmd->add_option("--save-params", ea.save_params, "Write the parameters used");
  embed_cmd->add_option("--out", ea.out, "Output EMB1 store");

  ScoreArgs sa;
  auto* score_cmd = app.add_subcommand("score", "Cosine-score a trial list");
  score_cmd->add_option("--trials", sa.trials, "Trial list")->required();
  score_cmd->add_option("--embeddings", sa.embeddings, "EMB1 store")->required();
  score_cmd->add_option("--metadata", sa.metadata, "speaker_id,gender,age_group CSV");
  score_cmd->add_option("--dimension", sa.dimension, "gender, age_group or custom")->capture_default_str();
  score_cmd->add_option("--speaker-regex", sa.speaker_regex, "Speaker id pattern (first group)");
  score_cmd->add_flag("--skip-unknown", sa.skip_unknown, "Drop trials whose speaker has no metadata");
  score_cmd->add_option("--out", sa.out, "Output score file");

  SweepArgs swa;
  auto* sweep_cmd = app.add_subcommand("sweep", "FAR/FRR sweep, EER and minDCF of a score file");
  sweep_cmd->add_option("--scores", swa.scores, "Score file")->required();
  sweep_cmd->add_flag("--by-group", swa.by_group, "One sweep per group column value");

  CalibrateArgs ca;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Per-group thresholds at a common FAR");
  calibrate_cmd->add_option("--scores", ca.scores, "Grouped score file")->required();
  calibrate_cmd->add_option("--far", ca.far, "FAR target")->capture_default_str();
  calibrate_cmd->add_option("--dimension", ca.dimension, "Group dimension name")->capture_default_str();

  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train-detector", "Train the group detector on labeled embeddings");
  train_cmd->add_option("--embeddings", ta.embeddings, "EMB1 store")->required();
  train_cmd->add_option("--labels", ta.labels, "utterance_id,label CSV")->required();
  train_cmd->add_option("--test-embeddings", ta.test_embeddings, "Held-out EMB1 store");
  train_cmd->add_option("--test-labels", ta.test_labels, "Held-out labels CSV");
  train_cmd->add_option("--dimension", ta.dimension, "Group dimension the labels belong to")->capture_default_str();
  train_cmd->add_option("--out", ta.out, "Output prefix inside --output-dir")->capture_default_str();

  DetectArgs da;
  auto* detect_cmd = app.add_subcommand("detect", "Infer group context, optionally verifying trials");
  detect_cmd->add_option("--embeddings", da.embeddings, "EMB1 store")->required();
  detect_cmd->add_option("--detector", da.detector, "Detector prefix (.nar/.json)")->required();
  detect_cmd->add_option("--trials", da.trials, "Trial list to verify");
  detect_cmd->add_option("--table", da.table, "Threshold table JSON");
  detect_cmd->add_flag("--no-fallback", da.no_fallback, "Fail instead of using the single threshold");

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Score, sweep, calibrate and report");
  run_cmd->add_option("--trials", ra.spec.trials_path, "Trial list");
  run_cmd->add_option("--embeddings", ra.spec.embeddings_path, "EMB1 store");
  run_cmd->add_option("--audio-dir", ra.spec.audio_dir, "Directory holding <utterance_id>.wav");
  run_cmd->add_option("--params", ra.spec.params_path, "Model parameters for --audio-dir");
  run_cmd->add_option("--metadata", ra.spec.metadata_path, "speaker_id,gender,age_group CSV");
  run_cmd->add_option("--far", ra.spec.far_targets, "FAR target(s)")->capture_default_str();
  run_cmd->add_option("--dimension", ra.dimension, "gender, age_group or custom")->capture_default_str();
  run_cmd->add_option("--speaker-regex", ra.spec.speaker_rule.pattern, "Speaker id pattern (first group)");
  run_cmd->add_flag("--skip-unknown", ra.skip_unknown, "Drop trials whose speaker has no metadata");
  run_cmd->add_flag("--synthetic", ra.synthetic, "Generate a two-group synthetic cohort instead of reading files");

  int frames = 200;
  auto* pc_cmd = app.add_subcommand("param-count", "Parameter and MAC counts");
  pc_cmd->add_option("--frames", frames, "Input frames for the MAC count")->capture_default_str();

  auto* selftest_cmd = app.add_subcommand("selftest", "Quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*featurize_cmd) return cmd_featurize(g, fa);
    if (*embed_cmd) return cmd_embed(g, ea);
    if (*score_cmd) return cmd_score(g, sa);
    if (*sweep_cmd) return cmd_sweep(g, swa);
    if (*calibrate_cmd) return cmd_calibrate(g, ca);
    if (*train_cmd) return cmd_train_detector(g, ta);
    if (*detect_cmd) return cmd_detect(g, da);
    if (*run_cmd) {
      if (!ra.synthetic && ra.spec.trials_path.empty()) throw ConfigError("run: --trials or --synthetic is required");
      return cmd_run(g, ra);
    }
    if (*pc_cmd) return cmd_param_count(g, frames);
    if (*selftest_cmd) return cmd_selftest(g);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
