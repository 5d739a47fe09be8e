// include/adaptsv/wav.hpp

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
#include <span>
#include <string>
#include <vector>

namespace adaptsv {

// Mono audio with samples nominally in [-1, 1].
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = 16000;
};

// RIFF/WAVE, PCM 16-bit signed little-endian, mono. Samples are divided by
// 32768. Any other encoding is rejected with a ParseError naming the field.
AudioSignal parse_wav(std::span<const std::uint8_t> bytes);
AudioSignal read_wav(const std::string& path);

// Writes 16-bit PCM mono; samples are clamped to [-1, 32767/32768].
std::vector<std::uint8_t> encode_wav(const AudioSignal& signal);
void write_wav(const std::string& path, const AudioSignal& signal);

}  // namespace adaptsv
