// tests/test_features.cpp

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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <doctest.h>

#include "adaptsv/error.hpp"
#include "adaptsv/features.hpp"
#include "adaptsv/fft.hpp"
#include "adaptsv/wav.hpp"

using namespace adaptsv;

namespace {

AudioSignal noise(std::size_t n, std::uint64_t seed, double amp = 0.3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  AudioSignal s;
  s.sample_rate = 16000;
  s.samples.resize(n);
  for (auto& v : s.samples) v = u(rng);
  return s;
}

}  // namespace

TEST_CASE("frame counts follow the floor formula") {
  const FeatureConfig cfg;
  CHECK(cfg.frame_length_samples() == 400);
  CHECK(cfg.frame_shift_samples() == 160);
  CHECK(cfg.padded_fft_size() == 512);
  CHECK(frame_signal(noise(16000, 1), cfg).size() == 98);
  CHECK(frame_signal(noise(400, 1), cfg).size() == 1);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> len(400, 40000);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = len(rng);
    CHECK(frame_signal(noise(n, i), cfg).size() == 1 + (n - 400) / 160);
    CHECK(num_frames(n, cfg) == 1 + (n - 400) / 160);
  }
}

TEST_CASE("a signal shorter than one frame is rejected with both lengths") {
  try {
    frame_signal(noise(399, 1), FeatureConfig{});
    FAIL("expected an error");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("utterance too short") != std::string::npos);
    CHECK(msg.find("400") != std::string::npos);
    CHECK(msg.find("399") != std::string::npos);
  }
}

TEST_CASE("framing leaves the input untouched") {
  const auto s = noise(2000, 9);
  const auto copy = s.samples;
  frame_signal(s, FeatureConfig{});
  CHECK(s.samples == copy);
}

TEST_CASE("zero frame gives log(energy floor) everywhere") {
  const FeatureConfig cfg;
  const std::vector<double> frame(400, 0.0);
  for (double v : log_mel_filterbank(frame, cfg)) CHECK(v == std::log(cfg.energy_floor));
}

TEST_CASE("a tone at a bin's center frequency peaks in that bin") {
  const FeatureConfig cfg;
  const MelFilterbank fb(cfg);
  for (int bin : {30, 40, 55, 70, 79}) {
    // Independent center computation from the HTK mel mapping.
    const double lo = 1127.0 * std::log(1.0 + cfg.low_freq / 700.0);
    const double hi = 1127.0 * std::log(1.0 + cfg.high_freq / 700.0);
    const double mel = lo + (hi - lo) * (bin + 1) / (cfg.n_mels + 1);
    const double hz = 700.0 * (std::exp(mel / 1127.0) - 1.0);
    CHECK(fb.center_hz(bin) == doctest::Approx(hz).epsilon(1e-9));

    AudioSignal s;
    s.sample_rate = 16000;
    for (int i = 0; i < 400; ++i) s.samples.push_back(0.5 * std::sin(2 * M_PI * hz * i / 16000.0));
    const auto frames = frame_signal(s, cfg);
    const auto out = log_mel_filterbank(frames[0], cfg);
    CHECK(std::max_element(out.begin(), out.end()) - out.begin() == bin);
  }
}

TEST_CASE("filter energies never exceed the total spectral energy") {
  const FeatureConfig cfg;
  const MelFilterbank fb(cfg);
  for (int seed = 0; seed < 10; ++seed) {
    const auto frame = noise(400, seed).samples;
    const auto spec = power_spectrum(frame, 512);
    const double total = std::accumulate(spec.begin(), spec.end(), 0.0);
    const auto lin = fb.linear_energies(spec);
    CHECK(std::accumulate(lin.begin(), lin.end(), 0.0) <= total);
  }
}

TEST_CASE("Parseval holds for the internal FFT") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (std::size_t n : {8u, 64u, 512u, 1024u}) {
    std::vector<double> x(n);
    for (auto& v : x) v = g(rng);
    std::vector<std::complex<double>> X(x.begin(), x.end());
    fft_inplace(X);
    double et = 0, ef = 0;
    for (double v : x) et += v * v;
    for (const auto& c : X) ef += std::norm(c);
    CHECK(et == doctest::Approx(ef / n).epsilon(1e-6));
  }
  std::vector<std::complex<double>> bad(6);
  CHECK_THROWS_AS(fft_inplace(bad), ConfigError);
}

TEST_CASE("featurize shapes, determinism and scaling") {
  const FeatureConfig cfg;
  const auto s = noise(32000, 4);
  const auto a = featurize(s, cfg, "u1");
  CHECK(a.frames == 198);
  CHECK(a.n_mels == 80);
  CHECK(a.utterance_id == "u1");
  CHECK(a.config_hash == cfg.hash());
  CHECK(featurize(noise(400, 2), cfg).frames == 1);
  CHECK(featurize(s, cfg, "u1").values == a.values);
  for (double v : a.values) CHECK(std::isfinite(v));

  for (double c : {0.5, 2.0, 3.7}) {
    AudioSignal t = s;
    for (auto& v : t.samples) v *= c;
    const auto b = featurize(t, cfg);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      if (a.values[i] <= std::log(cfg.energy_floor) + 1 || b.values[i] <= std::log(cfg.energy_floor) + 1) continue;
      CHECK(b.values[i] - a.values[i] == doctest::Approx(2 * std::log(c)).epsilon(1e-6));
    }
  }
}

TEST_CASE("batch featurization matches per-utterance results") {
  std::vector<AudioSignal> sigs{noise(4000, 1), noise(399, 2), noise(8000, 3)};
  const std::vector<std::string> ids{"a", "b", "c"};
  CHECK_THROWS_AS(featurize_batch(sigs, ids, FeatureConfig{}), DataError);
  sigs[1] = noise(1000, 2);
  const auto out = featurize_batch(sigs, ids, FeatureConfig{});
  for (int i = 0; i < 3; ++i) CHECK(out[i].values == featurize(sigs[i], FeatureConfig{}, ids[i]).values);
}

TEST_CASE("feature config validation") {
  FeatureConfig c;
  c.high_freq = 9000;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = FeatureConfig{};
  c.fft_size = 256;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = FeatureConfig{};
  c.preemphasis = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(parse_window_type("hann") == WindowType::kHann);
  CHECK_THROWS_AS(parse_window_type("kaiser"), ConfigError);
}

TEST_CASE("WAV: PCM16 mono round trip and rejection of other encodings") {
  AudioSignal s;
  s.sample_rate = 16000;
  s.samples = {0.0, 0.5, -0.5, -1.0, 32767.0 / 32768.0};
  const auto bytes = encode_wav(s);
  const auto back = parse_wav(bytes);
  CHECK(back.sample_rate == 16000);
  CHECK(back.samples == s.samples);

  auto stereo = bytes;
  stereo[22] = 2;  // channel count
  CHECK_THROWS_AS(parse_wav(stereo), ParseError);
  auto bits = bytes;
  bits[34] = 8;  // bits per sample
  CHECK_THROWS_AS(parse_wav(bits), ParseError);
  auto magic = bytes;
  magic[0] = 'X';
  CHECK_THROWS_AS(parse_wav(magic), ParseError);
}
