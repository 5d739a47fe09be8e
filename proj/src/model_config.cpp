// src/model_config.cpp

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

#include "adaptsv/model_config.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "adaptsv/error.hpp"

namespace adaptsv {

void ModelConfig::validate() const {
  if (n_mels < 1) throw ConfigError("model config: n_mels must be >= 1");
  if (scale < 2) throw ConfigError("model config: scale must be >= 2");
  if (basewidth < 1) throw ConfigError("model config: basewidth must be >= 1");
  if (stem_channels < 1 || stem_kernel < 1 || stem_stride_freq < 1 || stem_stride_time < 1 || stem_padding < 0)
    throw ConfigError("model config: invalid stem parameters");
  if (blocks.empty()) throw ConfigError("model config: at least one block stack is required");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const BlockSpec& b = blocks[i];
    if (b.planes < 1 || b.out_channels < 1 || b.repeats < 1 || b.stride < 1)
      throw ConfigError("model config: block stack " + std::to_string(i) + " has non-positive entries");
    if (subset_width(b) < 1)
      throw ConfigError("model config: block stack " + std::to_string(i) +
                        " yields zero-width subsets (planes * basewidth < 64)");
  }
  if (embedding_dim < 1) throw ConfigError("model config: embedding_dim must be >= 1");
  if (n_classes < 1) throw ConfigError("model config: n_classes must be >= 1");
  if (asp_hidden < 1) throw ConfigError("model config: asp_hidden must be >= 1");
  if (!(asp_eps > 0.0) || !(bn_eps > 0.0)) throw ConfigError("model config: eps values must be positive");
  if (!(am_scale > 0.0) || am_margin < 0.0) throw ConfigError("model config: invalid AM-Softmax parameters");
}

std::string ModelConfig::hash() const {
  const std::string text = format_model_config(*this);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::string format_model_config(const ModelConfig& c) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "n_mels = " << c.n_mels << '\n'
      << "basewidth = " << c.basewidth << '\n'
      << "scale = " << c.scale << '\n'
      << "stem_channels = " << c.stem_channels << '\n'
      << "stem_kernel = " << c.stem_kernel << '\n'
      << "stem_stride_freq = " << c.stem_stride_freq << '\n'
      << "stem_stride_time = " << c.stem_stride_time << '\n'
      << "stem_padding = " << c.stem_padding << '\n'
      << "blocks = ";
  for (std::size_t i = 0; i < c.blocks.size(); ++i) {
    const BlockSpec& b = c.blocks[i];
    out << (i ? "," : "") << b.planes << ':' << b.out_channels << ':' << b.repeats << ':' << b.stride;
  }
  out << '\n'
      << "embedding_dim = " << c.embedding_dim << '\n'
      << "n_classes = " << c.n_classes << '\n'
      << "am_margin = " << c.am_margin << '\n'
      << "am_scale = " << c.am_scale << '\n'
      << "asp_eps = " << c.asp_eps << '\n'
      << "asp_hidden = " << c.asp_hidden << '\n'
      << "bn_eps = " << c.bn_eps << '\n';
  return out.str();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<BlockSpec> parse_blocks(const std::string& v) {
  std::vector<BlockSpec> blocks;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    BlockSpec b;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream is(item);
    if (!(is >> b.planes >> c1 >> b.out_channels >> c2 >> b.repeats >> c3 >> b.stride) || c1 != ':' ||
        c2 != ':' || c3 != ':' || !(is >> std::ws).eof())
      throw ConfigError("model config: block entry '" + item + "' is not planes:out:repeats:stride");
    blocks.push_back(b);
  }
  return blocks;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config: expected 'key = value' at line " + std::to_string(line_no), line_no);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("config: empty key at line " + std::to_string(line_no), line_no);
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second)
      throw ParseError("config: duplicate key '" + key + "' at line " + std::to_string(line_no), line_no);
  }
  return kv;
}

ModelConfig parse_model_config(const std::string& text) { return model_config_from(parse_key_values(text)); }

ModelConfig model_config_from(const std::map<std::string, std::string>& values) {
  ModelConfig c;
  for (const auto& [key, v] : values) {
    if (key == "n_mels") c.n_mels = config_int(key, v);
    else if (key == "basewidth") c.basewidth = config_int(key, v);
    else if (key == "scale") c.scale = config_int(key, v);
    else if (key == "stem_channels") c.stem_channels = config_int(key, v);
    else if (key == "stem_kernel") c.stem_kernel = config_int(key, v);
    else if (key == "stem_stride_freq") c.stem_stride_freq = config_int(key, v);
    else if (key == "stem_stride_time") c.stem_stride_time = config_int(key, v);
    else if (key == "stem_padding") c.stem_padding = config_int(key, v);
    else if (key == "blocks") c.blocks = parse_blocks(v);
    else if (key == "embedding_dim") c.embedding_dim = config_int(key, v);
    else if (key == "n_classes") c.n_classes = config_int(key, v);
    else if (key == "am_margin") c.am_margin = config_double(key, v);
    else if (key == "am_scale") c.am_scale = config_double(key, v);
    else if (key == "asp_eps") c.asp_eps = config_double(key, v);
    else if (key == "asp_hidden") c.asp_hidden = config_int(key, v);
    else if (key == "bn_eps") c.bn_eps = config_double(key, v);
    else throw ConfigError("model config: unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ModelConfig load_model_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_config(ss.str());
}

int config_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

double config_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  return out;
}

}  // namespace adaptsv
