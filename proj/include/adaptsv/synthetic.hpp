// include/adaptsv/synthetic.hpp

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

// Seeded synthetic cohorts: speaker embeddings, trial lists and metadata
// for end-to-end runs, plus labeled clusters for the group detector.

#include <cstdint>
#include <string>
#include <vector>

#include "adaptsv/containers.hpp"
#include "adaptsv/group_detector.hpp"
#include "adaptsv/trials.hpp"

namespace adaptsv {

struct CohortGroup {
  std::string value;
  // Norm of a direction shared by every speaker of the group. Raises the
  // group's nontarget scores by roughly norm^2 / (1 + norm^2 + noise^2).
  double shared_norm = 0.0;
};

struct CohortSpec {
  GroupDimension dimension = GroupDimension::kGender;
  std::vector<CohortGroup> groups = {{"A", 0.0}, {"B", 0.38}};
  int speakers_per_group = 40;
  int utterances_per_speaker = 6;
  int nontargets_per_utterance = 40;
  int dim = 64;
  double noise = 1.4;  // expected norm of the per-utterance noise
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticCohort {
  EmbeddingStore store;
  std::vector<TrialPair> trials;  // group left unset; join via metadata
  SpeakerMetadata metadata;
};

// Utterance ids are "<speaker>/<k>". Trials enroll on utterance 0 of each
// speaker against the speaker's other utterances (targets) and against
// utterances of other speakers in the same group (nontargets).
SyntheticCohort generate_cohort(const CohortSpec& spec);

// Two Gaussian clusters at +/- separation * u for a random unit vector u,
// per-dimension standard deviation sigma; labels alternate 0/1.
LabeledEmbeddingSet separable_clusters(std::size_t n, int dim, double separation, double sigma, std::uint64_t seed,
                                       std::vector<std::string> class_tags = {"male", "female"});

}  // namespace adaptsv
