// src/synthetic.cpp

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

#include "adaptsv/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "adaptsv/error.hpp"

namespace adaptsv {

namespace {

std::vector<double> random_direction(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(dim);
  double norm = 0.0;
  for (double& x : v) {
    x = n(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::string speaker_name(std::size_t g, int s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "g%zus%03d", g, s);
  return buf;
}

}  // namespace

void CohortSpec::validate() const {
  if (groups.empty()) throw ConfigError("cohort: at least one group required");
  if (speakers_per_group < 2) throw ConfigError("cohort: speakers_per_group must be >= 2");
  if (utterances_per_speaker < 2) throw ConfigError("cohort: utterances_per_speaker must be >= 2");
  if (nontargets_per_utterance < 1 || dim < 2) throw ConfigError("cohort: nontargets and dim must be positive");
  if (!(noise >= 0.0)) throw ConfigError("cohort: noise must be >= 0");
  for (const auto& g : groups)
    if (g.value.empty() || !(g.shared_norm >= 0.0)) throw ConfigError("cohort: invalid group entry");
}

SyntheticCohort generate_cohort(const CohortSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, spec.noise / std::sqrt(static_cast<double>(spec.dim)));
  SyntheticCohort out;
  out.store = EmbeddingStore(spec.dim);

  std::vector<std::vector<std::string>> speakers(spec.groups.size());
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    const auto shared = random_direction(rng, spec.dim);
    for (int s = 0; s < spec.speakers_per_group; ++s) {
      const std::string spk = speaker_name(g, s);
      speakers[g].push_back(spk);
      out.metadata[spk].push_back(GroupKey::make(spec.dimension, spec.groups[g].value));
      const auto voice = random_direction(rng, spec.dim);
      for (int u = 0; u < spec.utterances_per_speaker; ++u) {
        Embedding e;
        e.utterance_id = spk + "/" + std::to_string(u);
        e.values.resize(spec.dim);
        for (int d = 0; d < spec.dim; ++d)
          e.values[d] = static_cast<float>(voice[d] + spec.groups[g].shared_norm * shared[d] + gauss(rng));
        out.store.add(std::move(e));
      }
    }
  }

  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    std::uniform_int_distribution<int> pick_spk(0, spec.speakers_per_group - 2);
    std::uniform_int_distribution<int> pick_utt(0, spec.utterances_per_speaker - 1);
    for (int s = 0; s < spec.speakers_per_group; ++s) {
      const std::string enroll = speakers[g][s] + "/0";
      for (int u = 1; u < spec.utterances_per_speaker; ++u)
        out.trials.push_back({TrialLabel::kTarget, enroll, speakers[g][s] + "/" + std::to_string(u), std::nullopt});
      for (int k = 0; k < spec.nontargets_per_utterance; ++k) {
        int other = pick_spk(rng);
        if (other >= s) ++other;
        out.trials.push_back({TrialLabel::kNontarget, enroll,
                              speakers[g][other] + "/" + std::to_string(pick_utt(rng)), std::nullopt});
      }
    }
  }
  return out;
}

LabeledEmbeddingSet separable_clusters(std::size_t n, int dim, double separation, double sigma, std::uint64_t seed,
                                       std::vector<std::string> class_tags) {
  if (n < 2 || dim < 1 || class_tags.size() != 2) throw ConfigError("separable_clusters: need n >= 2, dim >= 1, two tags");
  std::mt19937_64 rng(seed);
  const auto u = random_direction(rng, dim);
  std::normal_distribution<double> gauss(0.0, sigma);
  LabeledEmbeddingSet set;
  set.features = Matrix(n, dim);
  set.class_tags = std::move(class_tags);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = static_cast<int>(i % 2);
    const double sign = y == 0 ? 1.0 : -1.0;
    for (int d = 0; d < dim; ++d) set.features(i, d) = static_cast<float>(sign * separation * u[d] + gauss(rng));
    set.labels.push_back(y);
    set.ids.push_back("c" + std::to_string(y) + "_" + std::to_string(i));
  }
  return set;
}

}  // namespace adaptsv
