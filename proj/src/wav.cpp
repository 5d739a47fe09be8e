// src/wav.cpp

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

#include "adaptsv/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "adaptsv/error.hpp"

namespace adaptsv {

namespace {

std::uint32_t le32(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) | (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

std::uint16_t le16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t off, const char* tag) {
  return std::memcmp(b.data() + off, tag, 4) == 0;
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

}  // namespace

AudioSignal parse_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) throw ParseError("wav: file shorter than RIFF header", 0);
  if (!tag_is(bytes, 0, "RIFF")) throw ParseError("wav: missing RIFF tag at offset 0", 0);
  if (!tag_is(bytes, 8, "WAVE")) throw ParseError("wav: missing WAVE tag at offset 8", 8);

  bool have_fmt = false;
  int sample_rate = 0;
  std::size_t off = 12;
  while (off + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = le32(bytes, off + 4);
    const std::size_t body = off + 8;
    if (body + chunk_size > bytes.size())
      throw ParseError("wav: chunk at offset " + std::to_string(off) + " runs past end of file", off);
    if (tag_is(bytes, off, "fmt ")) {
      if (chunk_size < 16) throw ParseError("wav: fmt chunk too small", off);
      const std::uint16_t format = le16(bytes, body);
      const std::uint16_t channels = le16(bytes, body + 2);
      const std::uint32_t rate = le32(bytes, body + 4);
      const std::uint16_t bits = le16(bytes, body + 14);
      if (format != 1)
        throw ParseError("wav: unsupported audio format " + std::to_string(format) + " (need PCM = 1)", body);
      if (channels != 1)
        throw ParseError("wav: unsupported channel count " + std::to_string(channels) + " (need mono)", body + 2);
      if (bits != 16)
        throw ParseError("wav: unsupported bits per sample " + std::to_string(bits) + " (need 16)", body + 14);
      if (rate == 0) throw ParseError("wav: zero sample rate", body + 4);
      sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (tag_is(bytes, off, "data")) {
      if (!have_fmt) throw ParseError("wav: data chunk before fmt chunk", off);
      if (chunk_size % 2 != 0) throw ParseError("wav: odd data chunk size for 16-bit audio", off + 4);
      AudioSignal sig;
      sig.sample_rate = sample_rate;
      sig.samples.resize(chunk_size / 2);
      for (std::size_t i = 0; i < sig.samples.size(); ++i) {
        const auto v = static_cast<std::int16_t>(le16(bytes, body + 2 * i));
        sig.samples[i] = v / 32768.0;
      }
      if (sig.samples.empty()) throw ParseError("wav: empty data chunk", off);
      return sig;
    }
    off = body + chunk_size + (chunk_size & 1u);
  }
  throw ParseError("wav: no data chunk found", off);
}

AudioSignal read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open wav file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_wav(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.offset());
  }
}

std::vector<std::uint8_t> encode_wav(const AudioSignal& signal) {
  std::vector<std::uint8_t> out;
  const auto data_bytes = static_cast<std::uint32_t>(signal.samples.size() * 2);
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(signal.sample_rate));
  put32(out, static_cast<std::uint32_t>(signal.sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put32(out, data_bytes);
  for (double s : signal.samples) {
    const double scaled = std::round(std::clamp(s, -1.0, 32767.0 / 32768.0) * 32768.0);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  return out;
}

void write_wav(const std::string& path, const AudioSignal& signal) {
  const auto bytes = encode_wav(signal);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write wav file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace adaptsv
