// include/adaptsv/embedding.hpp

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

#include <span>
#include <string>
#include <vector>

namespace adaptsv {

// Fixed-length speaker embedding for one utterance.
struct Embedding {
  std::string utterance_id;
  std::vector<float> values;

  std::size_t dim() const { return values.size(); }
  std::span<const float> view() const { return values; }
  bool operator==(const Embedding&) const = default;
};

}  // namespace adaptsv
