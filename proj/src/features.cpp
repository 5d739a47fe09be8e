// src/features.cpp

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

#include "adaptsv/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "adaptsv/error.hpp"
#include "adaptsv/fft.hpp"

namespace adaptsv {

WindowType parse_window_type(const std::string& name) {
  if (name == "hamming") return WindowType::kHamming;
  if (name == "hann" || name == "hanning") return WindowType::kHann;
  if (name == "povey") return WindowType::kPovey;
  if (name == "rectangular") return WindowType::kRectangular;
  throw ConfigError("unknown window type: " + name);
}

std::string to_string(WindowType w) {
  switch (w) {
    case WindowType::kHamming: return "hamming";
    case WindowType::kHann: return "hann";
    case WindowType::kPovey: return "povey";
    case WindowType::kRectangular: return "rectangular";
  }
  return "unknown";
}

std::size_t FeatureConfig::frame_length_samples() const {
  return static_cast<std::size_t>(std::llround(sample_rate * frame_len_ms / 1000.0));
}

std::size_t FeatureConfig::frame_shift_samples() const {
  return static_cast<std::size_t>(std::llround(sample_rate * frame_shift_ms / 1000.0));
}

std::size_t FeatureConfig::padded_fft_size() const {
  return fft_size > 0 ? static_cast<std::size_t>(fft_size) : next_power_of_two(frame_length_samples());
}

void FeatureConfig::validate() const {
  if (sample_rate <= 0) throw ConfigError("feature config: sample_rate must be positive");
  if (frame_length_samples() < 1 || frame_shift_samples() < 1)
    throw ConfigError("feature config: frame length and shift must cover at least one sample");
  if (n_mels < 1) throw ConfigError("feature config: n_mels must be >= 1");
  if (!(low_freq > 0.0 && low_freq < high_freq && high_freq <= sample_rate / 2.0))
    throw ConfigError("feature config: need 0 < low_freq < high_freq <= sample_rate/2");
  if (fft_size != 0 && (!is_power_of_two(static_cast<std::size_t>(fft_size)) ||
                        static_cast<std::size_t>(fft_size) < frame_length_samples()))
    throw ConfigError("feature config: fft_size must be a power of two >= frame length");
  if (!(preemphasis >= 0.0 && preemphasis < 1.0))
    throw ConfigError("feature config: preemphasis must lie in [0, 1)");
  if (!(energy_floor > 0.0)) throw ConfigError("feature config: energy_floor must be positive");
}

std::string FeatureConfig::hash() const {
  std::ostringstream key;
  key << std::setprecision(17) << sample_rate << '|' << frame_len_ms << '|' << frame_shift_ms << '|'
      << n_mels << '|' << padded_fft_size() << '|' << low_freq << '|' << high_freq << '|'
      << preemphasis << '|' << dither << '|' << dither_amplitude << '|' << dither_seed << '|'
      << to_string(window) << '|' << energy_floor;
  // FNV-1a 64
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : key.str()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::size_t num_frames(std::size_t n_samples, const FeatureConfig& config) {
  const std::size_t len = config.frame_length_samples();
  if (n_samples < len) return 0;
  return 1 + (n_samples - len) / config.frame_shift_samples();
}

double hz_to_mel(double hz) { return 1127.0 * std::log(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::exp(mel / 1127.0) - 1.0); }

namespace {

std::vector<double> make_window(WindowType type, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n == 1) return w;
  const double a = 2.0 * std::numbers::pi / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(a * static_cast<double>(i));
    switch (type) {
      case WindowType::kHamming: w[i] = 0.54 - 0.46 * c; break;
      case WindowType::kHann: w[i] = 0.5 - 0.5 * c; break;
      case WindowType::kPovey: w[i] = std::pow(0.5 - 0.5 * c, 0.85); break;
      case WindowType::kRectangular: break;
    }
  }
  return w;
}

}  // namespace

std::vector<std::vector<double>> frame_signal(const AudioSignal& signal, const FeatureConfig& config) {
  config.validate();
  if (signal.sample_rate != config.sample_rate)
    throw ConfigError("frame_signal: signal sample rate " + std::to_string(signal.sample_rate) +
                      " differs from config sample rate " + std::to_string(config.sample_rate));
  const std::size_t len = config.frame_length_samples();
  if (signal.samples.size() < len)
    throw DataError("utterance too short: need at least " + std::to_string(len) + " samples, got " +
                    std::to_string(signal.samples.size()));
  const std::size_t shift = config.frame_shift_samples();
  const std::size_t count = num_frames(signal.samples.size(), config);
  const auto window = make_window(config.window, len);

  std::mt19937_64 rng(config.dither_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<std::vector<double>> frames(count, std::vector<double>(len));
  for (std::size_t f = 0; f < count; ++f) {
    auto& frame = frames[f];
    std::copy_n(signal.samples.begin() + static_cast<std::ptrdiff_t>(f * shift), len, frame.begin());
    if (config.dither)
      for (double& x : frame) x += config.dither_amplitude * gauss(rng);
    if (config.preemphasis != 0.0) {
      for (std::size_t i = len - 1; i > 0; --i) frame[i] -= config.preemphasis * frame[i - 1];
      frame[0] -= config.preemphasis * frame[0];
    }
    for (std::size_t i = 0; i < len; ++i) frame[i] *= window[i];
  }
  return frames;
}

MelFilterbank::MelFilterbank(const FeatureConfig& config)
    : fft_size_(config.padded_fft_size()), energy_floor_(config.energy_floor) {
  config.validate();
  const double mel_low = hz_to_mel(config.low_freq);
  const double mel_high = hz_to_mel(config.high_freq);
  const double delta = (mel_high - mel_low) / (config.n_mels + 1);
  const std::size_t n_bins = fft_size_ / 2 + 1;
  const double hz_per_bin = static_cast<double>(config.sample_rate) / static_cast<double>(fft_size_);

  bins_.resize(config.n_mels);
  centers_mel_.resize(config.n_mels);
  for (int m = 0; m < config.n_mels; ++m) {
    const double left = mel_low + m * delta;
    const double center = left + delta;
    const double right = center + delta;
    centers_mel_[m] = center;
    Bin bin;
    bool started = false;
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double mel = hz_to_mel(hz_per_bin * static_cast<double>(k));
      double w = 0.0;
      if (mel > left && mel < right) w = mel <= center ? (mel - left) / delta : (right - mel) / delta;
      if (w > 0.0) {
        if (!started) {
          bin.first = k;
          started = true;
        }
        bin.weights.resize(k - bin.first + 1, 0.0);
        bin.weights[k - bin.first] = w;
      }
    }
    bins_[m] = std::move(bin);
  }
}

double MelFilterbank::center_hz(int bin) const { return mel_to_hz(centers_mel_.at(bin)); }

double MelFilterbank::weight(int bin, std::size_t k) const {
  const Bin& b = bins_.at(bin);
  if (k < b.first || k >= b.first + b.weights.size()) return 0.0;
  return b.weights[k - b.first];
}

std::vector<double> MelFilterbank::linear_energies(std::span<const double> power) const {
  if (power.size() != fft_size_ / 2 + 1) throw ConfigError("mel filterbank: power spectrum size mismatch");
  std::vector<double> out(bins_.size(), 0.0);
  for (std::size_t m = 0; m < bins_.size(); ++m) {
    const Bin& b = bins_[m];
    double acc = 0.0;
    for (std::size_t j = 0; j < b.weights.size(); ++j) acc += b.weights[j] * power[b.first + j];
    out[m] = acc;
  }
  return out;
}

std::vector<double> MelFilterbank::log_energies(std::span<const double> frame) const {
  auto energies = linear_energies(power_spectrum(frame, fft_size_));
  for (double& e : energies) e = std::log(std::max(e, energy_floor_));
  return energies;
}

std::vector<double> log_mel_filterbank(std::span<const double> frame, const FeatureConfig& config) {
  return MelFilterbank(config).log_energies(frame);
}

FeatureMatrix featurize(const AudioSignal& signal, const FeatureConfig& config,
                        const std::string& utterance_id) {
  const auto frames = frame_signal(signal, config);
  const MelFilterbank bank(config);
  FeatureMatrix fm;
  fm.frames = frames.size();
  fm.n_mels = config.n_mels;
  fm.utterance_id = utterance_id;
  fm.config_hash = config.hash();
  fm.values.resize(fm.frames * static_cast<std::size_t>(fm.n_mels));
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const auto row = bank.log_energies(frames[t]);
    std::copy(row.begin(), row.end(), fm.values.begin() + static_cast<std::ptrdiff_t>(t * fm.n_mels));
  }
  return fm;
}

std::vector<FeatureMatrix> featurize_batch(std::span<const AudioSignal> signals,
                                           std::span<const std::string> ids,
                                           const FeatureConfig& config) {
  if (ids.size() != signals.size()) throw ConfigError("featurize_batch: ids and signals differ in length");
  config.validate();
  std::vector<FeatureMatrix> out(signals.size());
  std::vector<std::exception_ptr> errors(signals.size());
  const auto n = static_cast<std::int64_t>(signals.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[i] = featurize(signals[i], config, ids[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const DataError& e) {
      throw DataError(ids[i] + ": " + e.what());
    }
  }
  return out;
}

}  // namespace adaptsv
