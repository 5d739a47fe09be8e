// src/containers.cpp

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

#include "adaptsv/containers.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "adaptsv/error.hpp"

namespace adaptsv {

namespace {

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> b, const char* format) : b_(b), format_(format) {}

  std::size_t offset() const { return off_; }
  bool at_end() const { return off_ == b_.size(); }

  void need(std::size_t n, const char* what) {
    if (b_.size() - off_ < n)
      throw ParseError(std::string(format_) + ": truncated " + what + " at offset " + std::to_string(off_) +
                           " (need " + std::to_string(n) + " bytes, have " + std::to_string(b_.size() - off_) + ")",
                       off_);
  }
  std::uint64_t le(int n, const char* what) {
    need(static_cast<std::size_t>(n), what);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b_[off_ + i]) << (8 * i);
    off_ += static_cast<std::size_t>(n);
    return v;
  }
  std::uint16_t u16(const char* what) { return static_cast<std::uint16_t>(le(2, what)); }
  std::uint32_t u32(const char* what) { return static_cast<std::uint32_t>(le(4, what)); }
  std::uint64_t u64(const char* what) { return le(8, what); }
  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
  std::string str(std::size_t n, const char* what) {
    need(n, what);
    std::string s(reinterpret_cast<const char*>(b_.data() + off_), n);
    off_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> b_;
  const char* format_;
  std::size_t off_ = 0;
};

void expect_magic(Reader& r, std::span<const std::uint8_t> bytes, const char* magic, const char* format) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), magic, 4) != 0)
    throw ParseError(std::string(format) + ": bad magic at offset 0", 0);
  r.str(4, "magic");
}

}  // namespace

void EmbeddingStore::add(Embedding e) {
  if (e.utterance_id.empty()) throw DataError("embedding store: empty utterance id");
  if (e.utterance_id.size() > 0xFFFF) throw DataError("embedding store: utterance id longer than 65535 bytes");
  if (dim_ == 0 && items_.empty()) dim_ = e.values.size();
  if (e.values.size() != dim_)
    throw DataError("embedding store: dim mismatch for '" + e.utterance_id + "' (" +
                    std::to_string(e.values.size()) + " vs " + std::to_string(dim_) + ")");
  const std::string id = e.utterance_id;
  if (!items_.emplace(id, std::move(e)).second) throw DataError("embedding store: duplicate id '" + id + "'");
}

const Embedding* EmbeddingStore::find(const std::string& id) const {
  const auto it = items_.find(id);
  return it == items_.end() ? nullptr : &it->second;
}

const Embedding& EmbeddingStore::at(const std::string& id) const {
  if (const auto* e = find(id)) return *e;
  throw DataError("embedding store: unknown id '" + id + "'");
}

std::vector<std::uint8_t> write_embeddings(const EmbeddingStore& store) {
  Writer w;
  w.bytes("EMB1", 4);
  w.u32(static_cast<std::uint32_t>(store.size()));
  w.u32(static_cast<std::uint32_t>(store.dim()));
  w.u64(0);
  for (const auto& [id, e] : store.items()) {
    w.u16(static_cast<std::uint16_t>(id.size()));
    w.bytes(id.data(), id.size());
    for (float v : e.values) w.f32(v);
  }
  return w.take();
}

EmbeddingStore read_embeddings(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "EMB1");
  expect_magic(r, bytes, "EMB1", "EMB1");
  const std::uint32_t count = r.u32("record count");
  const std::uint32_t dim = r.u32("dimension");
  const std::size_t reserved_at = r.offset();
  if (r.u64("reserved field") != 0)
    throw ParseError("EMB1: nonzero reserved field at offset " + std::to_string(reserved_at), reserved_at);
  if (count > 0 && dim == 0) throw ParseError("EMB1: dim mismatch: zero dimension with records at offset 8", 8);
  EmbeddingStore store(dim);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t rec_at = r.offset();
    const std::uint16_t len = r.u16("id length");
    if (len == 0) throw ParseError("EMB1: empty id at offset " + std::to_string(rec_at), rec_at);
    Embedding e;
    e.utterance_id = r.str(len, "id");
    r.need(static_cast<std::size_t>(dim) * 4, "embedding values");
    e.values.resize(dim);
    for (auto& v : e.values) v = r.f32("embedding values");
    if (store.contains(e.utterance_id))
      throw ParseError("EMB1: duplicate id '" + e.utterance_id + "' at offset " + std::to_string(rec_at), rec_at);
    store.add(std::move(e));
  }
  if (!r.at_end())
    throw ParseError("EMB1: dim mismatch or trailing bytes at offset " + std::to_string(r.offset()) +
                         " (header declares " + std::to_string(count) + " records of dim " + std::to_string(dim) + ")",
                     r.offset());
  return store;
}

std::vector<std::uint8_t> write_named_arrays(std::span<const NamedArray> arrays) {
  Writer w;
  w.bytes("NAR1", 4);
  w.u32(static_cast<std::uint32_t>(arrays.size()));
  w.u32(0);
  for (const auto& a : arrays) {
    std::size_t n = 1;
    for (auto d : a.shape) n *= d;
    if (n != a.values.size()) throw DataError("named array '" + a.name + "': shape does not match value count");
    if (a.name.empty() || a.name.size() > 0xFFFF) throw DataError("named array: invalid name length");
    w.u16(static_cast<std::uint16_t>(a.name.size()));
    w.bytes(a.name.data(), a.name.size());
    w.u32(static_cast<std::uint32_t>(a.shape.size()));
    for (auto d : a.shape) w.u32(d);
    for (float v : a.values) w.f32(v);
  }
  return w.take();
}

std::vector<NamedArray> read_named_arrays(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "NAR1");
  expect_magic(r, bytes, "NAR1", "NAR1");
  const std::uint32_t count = r.u32("array count");
  const std::size_t reserved_at = r.offset();
  if (r.u32("reserved field") != 0)
    throw ParseError("NAR1: nonzero reserved field at offset " + std::to_string(reserved_at), reserved_at);
  std::vector<NamedArray> arrays;
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedArray a;
    const std::uint16_t len = r.u16("name length");
    a.name = r.str(len, "name");
    const std::uint32_t ndim = r.u32("rank");
    std::size_t n = 1;
    for (std::uint32_t d = 0; d < ndim; ++d) {
      a.shape.push_back(r.u32("extent"));
      n *= a.shape.back();
    }
    r.need(n * 4, "array values");
    a.values.resize(n);
    for (auto& v : a.values) v = r.f32("array values");
    arrays.push_back(std::move(a));
  }
  if (!r.at_end())
    throw ParseError("NAR1: trailing bytes at offset " + std::to_string(r.offset()), r.offset());
  return arrays;
}

const NamedArray& find_array(std::span<const NamedArray> arrays, const std::string& name) {
  for (const auto& a : arrays)
    if (a.name == name) return a;
  throw DataError("missing named array '" + name + "'");
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << text;
}

}  // namespace adaptsv
