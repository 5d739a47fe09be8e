// include/adaptsv/containers.hpp

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

// Binary containers.
//
// EMB1 (embedding store), all integers little-endian:
//   "EMB1" | u32 count | u32 dim | u64 reserved = 0
//   count x ( u16 id_len | id bytes (UTF-8) | dim x f32 )
//
// NAR1 (named float arrays, used for model and detector parameters and
// feature matrices):
//   "NAR1" | u32 count | u32 reserved = 0
//   count x ( u16 name_len | name | u32 ndim | ndim x u32 extent | prod(extent) x f32 )

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "adaptsv/embedding.hpp"

namespace adaptsv {

class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dim) : dim_(dim) {}

  // Throws DataError on a duplicate id or a dimension mismatch. The first
  // insertion fixes the dimension of an empty, dimensionless store.
  void add(Embedding e);
  const Embedding* find(const std::string& id) const;
  const Embedding& at(const std::string& id) const;
  bool contains(const std::string& id) const { return items_.count(id) != 0; }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::size_t dim() const { return dim_; }
  const std::map<std::string, Embedding>& items() const { return items_; }

  // Model-config hash of the producer, if known. Not serialized.
  std::string provenance;

  bool operator==(const EmbeddingStore& o) const { return dim_ == o.dim_ && items_ == o.items_; }

 private:
  std::size_t dim_ = 0;
  std::map<std::string, Embedding> items_;
};

std::vector<std::uint8_t> write_embeddings(const EmbeddingStore& store);
EmbeddingStore read_embeddings(std::span<const std::uint8_t> bytes);

struct NamedArray {
  std::string name;
  std::vector<std::uint32_t> shape;
  std::vector<float> values;

  bool operator==(const NamedArray&) const = default;
};

std::vector<std::uint8_t> write_named_arrays(std::span<const NamedArray> arrays);
std::vector<NamedArray> read_named_arrays(std::span<const std::uint8_t> bytes);

// Lookup helper; throws DataError naming the missing array.
const NamedArray& find_array(std::span<const NamedArray> arrays, const std::string& name);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace adaptsv
