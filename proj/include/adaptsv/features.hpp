// include/adaptsv/features.hpp

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

// Log-mel filterbank front end: framing, pre-emphasis, windowing, power
// spectrum and triangular mel filters (HTK mel scale).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adaptsv/wav.hpp"

namespace adaptsv {

enum class WindowType { kHamming, kHann, kPovey, kRectangular };

WindowType parse_window_type(const std::string& name);
std::string to_string(WindowType w);

struct FeatureConfig {
  int sample_rate = 16000;
  double frame_len_ms = 25.0;
  double frame_shift_ms = 10.0;
  int n_mels = 80;
  int fft_size = 0;  // 0 selects the next power of two >= frame length
  double low_freq = 20.0;
  double high_freq = 7600.0;
  double preemphasis = 0.97;
  bool dither = false;
  double dither_amplitude = 1.0 / 32768.0;
  std::uint64_t dither_seed = 0;
  WindowType window = WindowType::kHamming;
  double energy_floor = 1e-10;

  std::size_t frame_length_samples() const;
  std::size_t frame_shift_samples() const;
  std::size_t padded_fft_size() const;
  // Throws ConfigError on any violated invariant.
  void validate() const;
  // Stable hex digest of every field; recorded in FeatureMatrix::config_hash.
  std::string hash() const;
};

// T x n_mels log energies, row-major by frame.
struct FeatureMatrix {
  std::size_t frames = 0;
  int n_mels = 0;
  std::vector<double> values;
  std::string utterance_id;
  std::string config_hash;

  double at(std::size_t t, int m) const { return values[t * n_mels + m]; }
  double& at(std::size_t t, int m) { return values[t * n_mels + m]; }
};

// 1 + floor((n - frame_len) / shift) for n >= frame_len, else 0.
std::size_t num_frames(std::size_t n_samples, const FeatureConfig& config);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Cuts the signal into pre-emphasized, windowed frames. The trailing partial
// frame is dropped. Throws DataError("utterance too short ...") when the
// signal is shorter than one frame.
std::vector<std::vector<double>> frame_signal(const AudioSignal& signal, const FeatureConfig& config);

class MelFilterbank {
 public:
  explicit MelFilterbank(const FeatureConfig& config);

  int num_bins() const { return static_cast<int>(bins_.size()); }
  std::size_t fft_size() const { return fft_size_; }
  double center_hz(int bin) const;

  // Filter energies of a power spectrum with fft_size/2+1 entries.
  std::vector<double> linear_energies(std::span<const double> power) const;
  // log(max(energy, floor)) of a windowed frame.
  std::vector<double> log_energies(std::span<const double> frame) const;
  // Weight of filter `bin` at FFT bin `k`.
  double weight(int bin, std::size_t k) const;

 private:
  struct Bin {
    std::size_t first = 0;
    std::vector<double> weights;
  };
  std::vector<Bin> bins_;
  std::vector<double> centers_mel_;
  std::size_t fft_size_;
  double energy_floor_;
};

std::vector<double> log_mel_filterbank(std::span<const double> frame, const FeatureConfig& config);

FeatureMatrix featurize(const AudioSignal& signal, const FeatureConfig& config,
                        const std::string& utterance_id = "");

// Featurizes utterances in parallel; result order follows the input order.
std::vector<FeatureMatrix> featurize_batch(std::span<const AudioSignal> signals,
                                           std::span<const std::string> ids,
                                           const FeatureConfig& config);

}  // namespace adaptsv
