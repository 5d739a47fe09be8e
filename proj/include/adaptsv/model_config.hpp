// include/adaptsv/model_config.hpp

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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace adaptsv {

// One Res2Net stack: `repeats` bottleneck blocks of planes -> out_channels.
// The stride applies to the first block of the stack.
struct BlockSpec {
  int planes = 64;
  int out_channels = 256;
  int repeats = 1;
  int stride = 1;

  bool operator==(const BlockSpec&) const = default;
};

struct ModelConfig {
  int n_mels = 80;
  int basewidth = 26;  // subset width per 64 bottleneck planes
  int scale = 8;
  int stem_channels = 64;
  int stem_kernel = 7;
  int stem_stride_freq = 2;
  int stem_stride_time = 1;
  int stem_padding = 3;
  std::vector<BlockSpec> blocks = {{64, 256, 3, 1}, {64, 256, 4, 2}, {128, 512, 6, 2}, {128, 512, 3, 1}};
  int embedding_dim = 256;
  int n_classes = 7315;
  double am_margin = 0.2;
  double am_scale = 30.0;
  double asp_eps = 1e-5;
  int asp_hidden = 128;
  double bn_eps = 1e-5;

  // Channels per Res2Net subset for a stack: floor(planes * basewidth / 64).
  int subset_width(const BlockSpec& b) const { return b.planes * basewidth / 64; }
  // Channels entering the multi-scale 3x3 stage: subset_width * scale.
  int module_width(const BlockSpec& b) const { return subset_width(b) * scale; }
  int final_channels() const { return blocks.empty() ? stem_channels : blocks.back().out_channels; }

  void validate() const;
  std::string hash() const;

  bool operator==(const ModelConfig&) const = default;
};

// Human-readable "key = value" form; '#' starts a comment. Blocks are written
// as "planes:out:repeats:stride" entries separated by commas.
std::string format_model_config(const ModelConfig& config);
ModelConfig parse_model_config(const std::string& text);
ModelConfig model_config_from(const std::map<std::string, std::string>& values);
ModelConfig load_model_config(const std::string& path);

// Shared "key = value" reader. Duplicate keys and lines without '=' raise
// ParseError with the 1-based line number.
std::map<std::string, std::string> parse_key_values(const std::string& text);

// Whole-string conversions; ConfigError names the key on failure.
int config_int(const std::string& key, const std::string& v);
double config_double(const std::string& key, const std::string& v);

}  // namespace adaptsv
