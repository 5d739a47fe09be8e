// src/embedding_model.cpp

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

#include "adaptsv/embedding_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "adaptsv/error.hpp"
#include "adaptsv/kernels.hpp"

namespace adaptsv {

namespace {

void relu_inplace(std::vector<double>& v) {
  for (double& x : v) x = x > 0.0 ? x : 0.0;
}

// Visits every parameter array of a (possibly const) ParameterSet with a
// stable name, its shape and whether it is trainable.
template <typename Params, typename F>
void for_each_array(Params& p, F&& f) {
  using U32 = std::uint32_t;
  auto conv = [&](const std::string& name, auto& c) {
    f(name + ".weight",
      std::vector<U32>{U32(c.out_channels), U32(c.in_channels), U32(c.kernel_h), U32(c.kernel_w)}, c.weight, true);
    if (!c.bias.empty()) f(name + ".bias", std::vector<U32>{U32(c.out_channels)}, c.bias, true);
  };
  auto bn = [&](const std::string& name, auto& b) {
    const std::vector<U32> shape{U32(b.gamma.size())};
    f(name + ".gamma", shape, b.gamma, true);
    f(name + ".beta", shape, b.beta, true);
    f(name + ".running_mean", shape, b.running_mean, false);
    f(name + ".running_var", shape, b.running_var, false);
  };
  auto convbn = [&](const std::string& name, auto& cb) {
    conv(name + ".conv", cb.conv);
    bn(name + ".bn", cb.bn);
  };

  convbn("stem", p.stem);
  for (std::size_t s = 0; s < p.stages.size(); ++s) {
    for (std::size_t b = 0; b < p.stages[s].size(); ++b) {
      auto& blk = p.stages[s][b];
      const std::string prefix = "stage" + std::to_string(s) + ".block" + std::to_string(b);
      convbn(prefix + ".reduce", blk.reduce);
      for (std::size_t k = 0; k < blk.module.subset_convs.size(); ++k)
        convbn(prefix + ".module.k" + std::to_string(k + 2), blk.module.subset_convs[k]);
      convbn(prefix + ".expand", blk.expand);
      if (blk.projection) convbn(prefix + ".projection", *blk.projection);
    }
  }
  const U32 C = U32(p.asp.channels), H = U32(p.asp.hidden);
  f("asp.w1", std::vector<U32>{H, C}, p.asp.w1, true);
  f("asp.b1", std::vector<U32>{H}, p.asp.b1, true);
  f("asp.v", std::vector<U32>{H}, p.asp.v, true);
  f("embedding.weight", std::vector<U32>{U32(p.embedding.out), U32(p.embedding.in)}, p.embedding.weight, true);
  f("embedding.bias", std::vector<U32>{U32(p.embedding.out)}, p.embedding.bias, true);
}

}  // namespace

BatchNorm BatchNorm::identity(int channels, double eps) {
  BatchNorm bn;
  bn.gamma.assign(channels, 1.0);
  bn.beta.assign(channels, 0.0);
  bn.running_mean.assign(channels, 0.0);
  bn.running_var.assign(channels, 1.0);
  bn.eps = eps;
  return bn;
}

void BatchNorm::apply(Tensor3& x) const {
  if (x.channels() != channels()) throw ConfigError("batch norm: channel mismatch");
  for (int c = 0; c < x.channels(); ++c) {
    const double scale = gamma[c] / std::sqrt(running_var[c] + eps);
    const double shift = beta[c] - running_mean[c] * scale;
    if (scale == 1.0 && shift == 0.0) continue;
    for (double& v : x.channel(c)) v = v * scale + shift;
  }
}

Conv2d Conv2d::make(int in, int out, int kernel, int stride_h, int stride_w, int pad) {
  Conv2d c;
  c.in_channels = in;
  c.out_channels = out;
  c.kernel_h = c.kernel_w = kernel;
  c.stride_h = stride_h;
  c.stride_w = stride_w;
  c.pad_h = c.pad_w = pad;
  c.weight.assign(static_cast<std::size_t>(out) * in * kernel * kernel, 0.0);
  return c;
}

Tensor3 Conv2d::forward(const Tensor3& x, Exec exec) const {
  if (x.channels() != in_channels)
    throw ConfigError("conv2d: expected " + std::to_string(in_channels) + " input channels, got " +
                      std::to_string(x.channels()));
  kernels::Conv2dShape s;
  s.in_channels = in_channels;
  s.in_height = x.height();
  s.in_width = x.width();
  s.out_channels = out_channels;
  s.kernel_h = kernel_h;
  s.kernel_w = kernel_w;
  s.stride_h = stride_h;
  s.stride_w = stride_w;
  s.pad_h = pad_h;
  s.pad_w = pad_w;
  if (s.out_height() < 1 || s.out_width() < 1) throw DataError("conv2d: input too small for kernel");
  Tensor3 y(out_channels, s.out_height(), s.out_width());
  if (exec == Exec::kSerial)
    kernels::serial::conv2d(s, x.data(), weight, bias, y.data());
  else
    kernels::omp::conv2d(s, x.data(), weight, bias, y.data());
  return y;
}

Tensor3 ConvBn::forward(const Tensor3& x, Exec exec, bool relu) const {
  Tensor3 y = conv.forward(x, exec);
  bn.apply(y);
  if (relu) relu_inplace(y.data());
  return y;
}

Tensor3 res2net_module_forward(const Tensor3& x, const Res2NetModule& module, Exec exec) {
  const int s = module.scale;
  if (s < 2) throw ConfigError("res2net module: scale must be >= 2");
  if (x.channels() % s != 0)
    throw ConfigError("res2net module: " + std::to_string(x.channels()) + " channels not divisible by scale " +
                      std::to_string(s));
  if (static_cast<int>(module.subset_convs.size()) != s - 1)
    throw ConfigError("res2net module: need scale-1 subset convs");
  const int width = x.channels() / s;
  for (const auto& k : module.subset_convs) {
    const Conv2d& c = k.conv;
    if (c.in_channels != width || c.out_channels != width || c.stride_h != 1 || c.stride_w != 1 ||
        c.kernel_h != 2 * c.pad_h + 1 || c.kernel_w != 2 * c.pad_w + 1)
      throw ConfigError("res2net module: subset conv must map " + std::to_string(width) +
                        " channels shape-preservingly");
  }

  Tensor3 y(x.channels(), x.height(), x.width());
  const std::size_t subset_len = static_cast<std::size_t>(width) * x.plane();
  auto subset_in = [&](int i) { return x.channels(i * width, width); };

  // y_1 = x_1
  std::copy_n(subset_in(0).begin(), subset_len, y.data().begin());
  Tensor3 prev;
  for (int i = 1; i < s; ++i) {
    Tensor3 in(width, x.height(), x.width());
    const auto xi = subset_in(i);
    std::copy(xi.begin(), xi.end(), in.data().begin());
    if (i >= 2)
      for (std::size_t j = 0; j < subset_len; ++j) in.data()[j] += prev.data()[j];
    prev = module.subset_convs[i - 1].forward(in, exec, /*relu=*/true);
    std::copy(prev.data().begin(), prev.data().end(),
              y.data().begin() + static_cast<std::ptrdiff_t>(i * subset_len));
  }
  return y;
}

Tensor3 res2net_block_forward(const Tensor3& x, const Res2NetBlock& block, Exec exec) {
  const Tensor3 h = block.reduce.forward(x, exec, true);
  const Tensor3 m = res2net_module_forward(h, block.module, exec);
  Tensor3 out = block.expand.forward(m, exec, false);
  if (block.projection) {
    const Tensor3 r = block.projection->forward(x, exec, false);
    if (!r.same_shape(out)) throw ConfigError("res2net block: projection shape mismatch");
    for (std::size_t j = 0; j < out.size(); ++j) out.data()[j] += r.data()[j];
  } else {
    if (!x.same_shape(out))
      throw ConfigError("res2net block: identity residual needs matching shapes (" + std::to_string(x.channels()) +
                        " vs " + std::to_string(out.channels()) + " channels)");
    for (std::size_t j = 0; j < out.size(); ++j) out.data()[j] += x.data()[j];
  }
  relu_inplace(out.data());
  return out;
}

AspOutput asp_pool(const Matrix& frames, const AttentiveStatsPooling& asp) {
  const std::size_t C = frames.rows, T = frames.cols;
  if (T < 1) throw DataError("asp: need at least one frame");
  if (C != static_cast<std::size_t>(asp.channels)) throw ConfigError("asp: channel mismatch");
  const std::size_t H = static_cast<std::size_t>(asp.hidden);

  std::vector<double> scores(T);
  std::vector<double> hidden(H);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t k = 0; k < H; ++k) {
      double acc = asp.b1[k];
      for (std::size_t c = 0; c < C; ++c) acc += asp.w1[k * C + c] * frames(c, t);
      hidden[k] = std::tanh(acc);
    }
    double e = asp.c;
    for (std::size_t k = 0; k < H; ++k) e += asp.v[k] * hidden[k];
    scores[t] = e;
  }

  AspOutput out;
  out.attention.resize(T);
  const double mx = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (std::size_t t = 0; t < T; ++t) z += (out.attention[t] = std::exp(scores[t] - mx));
  for (double& a : out.attention) a /= z;

  out.pooled.resize(2 * C);
  for (std::size_t c = 0; c < C; ++c) {
    double mean = 0.0;
    for (std::size_t t = 0; t < T; ++t) mean += out.attention[t] * frames(c, t);
    // Centered second moment; equals sum(a h^2) - mean^2 but stays >= 0.
    double var = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const double d = frames(c, t) - mean;
      var += out.attention[t] * d * d;
    }
    out.pooled[c] = mean;
    out.pooled[C + c] = std::sqrt(var + asp.eps);
  }
  return out;
}

int min_frames(const ModelConfig& config) {
  return std::max(1, config.stem_kernel - 2 * config.stem_padding);
}

std::vector<double> embed_values(const FeatureMatrix& features, const ParameterSet& params, Exec exec) {
  const ModelConfig& cfg = params.config;
  if (features.n_mels != cfg.n_mels)
    throw ConfigError("embed: features have " + std::to_string(features.n_mels) + " mel bins, model expects " +
                      std::to_string(cfg.n_mels));
  if (features.frames < static_cast<std::size_t>(min_frames(cfg)))
    throw DataError("utterance too short for model: need at least " + std::to_string(min_frames(cfg)) +
                    " frames, got " + std::to_string(features.frames));

  const int T = static_cast<int>(features.frames);
  Tensor3 x(1, cfg.n_mels, T);
  for (int t = 0; t < T; ++t)
    for (int m = 0; m < cfg.n_mels; ++m) x.at(0, m, t) = features.at(t, m);

  x = params.stem.forward(x, exec, true);
  for (const auto& stage : params.stages)
    for (const auto& block : stage) x = res2net_block_forward(x, block, exec);

  Matrix pooled(x.channels(), x.width());
  for (int c = 0; c < x.channels(); ++c)
    for (int t = 0; t < x.width(); ++t) {
      double acc = 0.0;
      for (int f = 0; f < x.height(); ++f) acc += x.at(c, f, t);
      pooled(c, t) = acc / x.height();
    }

  const AspOutput stats = asp_pool(pooled, params.asp);
  std::vector<double> emb(params.embedding.out);
  if (exec == Exec::kSerial)
    kernels::serial::dense(params.embedding.weight, params.embedding.bias, stats.pooled, emb);
  else
    kernels::omp::dense(params.embedding.weight, params.embedding.bias, stats.pooled, emb);
  return emb;
}

Embedding embed(const FeatureMatrix& features, const ParameterSet& params, Exec exec) {
  const auto v = embed_values(features, params, exec);
  Embedding e;
  e.utterance_id = features.utterance_id;
  e.values.assign(v.begin(), v.end());
  return e;
}

ParameterSet init_params(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  auto he_uniform = [&](std::vector<double>& w, int fan_in) {
    const double bound = std::sqrt(6.0 / fan_in);
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& v : w) v = static_cast<float>(dist(rng));
  };
  auto make_convbn = [&](int in, int out, int kernel, int sh, int sw, int pad) {
    ConvBn cb{Conv2d::make(in, out, kernel, sh, sw, pad), BatchNorm::identity(out, config.bn_eps)};
    he_uniform(cb.conv.weight, in * kernel * kernel);
    return cb;
  };

  ParameterSet p;
  p.config = config;
  p.stem = make_convbn(1, config.stem_channels, config.stem_kernel, config.stem_stride_freq, config.stem_stride_time,
                       config.stem_padding);
  int in = config.stem_channels;
  for (const BlockSpec& spec : config.blocks) {
    const int sub = config.subset_width(spec);
    const int width = config.module_width(spec);
    std::vector<Res2NetBlock> stage;
    for (int r = 0; r < spec.repeats; ++r) {
      const int stride = r == 0 ? spec.stride : 1;
      Res2NetBlock blk;
      blk.reduce = make_convbn(in, width, 1, stride, stride, 0);
      blk.module.scale = config.scale;
      for (int k = 1; k < config.scale; ++k) blk.module.subset_convs.push_back(make_convbn(sub, sub, 3, 1, 1, 1));
      blk.expand = make_convbn(width, spec.out_channels, 1, 1, 1, 0);
      if (stride != 1 || in != spec.out_channels)
        blk.projection = make_convbn(in, spec.out_channels, 1, stride, stride, 0);
      stage.push_back(std::move(blk));
      in = spec.out_channels;
    }
    p.stages.push_back(std::move(stage));
  }

  p.asp.channels = in;
  p.asp.hidden = config.asp_hidden;
  p.asp.eps = config.asp_eps;
  p.asp.w1.resize(static_cast<std::size_t>(config.asp_hidden) * in);
  he_uniform(p.asp.w1, in);
  p.asp.b1.assign(config.asp_hidden, 0.0);
  p.asp.v.resize(config.asp_hidden);
  he_uniform(p.asp.v, config.asp_hidden);
  p.asp.c = 0.0;

  p.embedding.in = 2 * in;
  p.embedding.out = config.embedding_dim;
  p.embedding.weight.resize(static_cast<std::size_t>(2 * in) * config.embedding_dim);
  he_uniform(p.embedding.weight, 2 * in);
  p.embedding.bias.assign(config.embedding_dim, 0.0);

  p.class_weights = Matrix(config.n_classes, config.embedding_dim);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t r = 0; r < p.class_weights.rows; ++r) {
    auto row = p.class_weights.row(r);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (double& v : row) {
        v = gauss(rng);
        norm += v * v;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (double& v : row) v = static_cast<float>(v / norm);
  }
  return p;
}

std::size_t ParameterSet::trainable_count(bool include_classifier) const {
  std::size_t n = 0;
  for_each_array(*this, [&](const std::string&, const std::vector<std::uint32_t>&, const std::vector<double>& v,
                            bool trainable) {
    if (trainable) n += v.size();
  });
  n += 1;  // asp.c
  if (include_classifier) n += class_weights.data.size();
  return n;
}

std::vector<NamedArray> ParameterSet::to_named_arrays() const {
  std::vector<NamedArray> out;
  for_each_array(*this, [&](const std::string& name, const std::vector<std::uint32_t>& shape,
                            const std::vector<double>& v, bool) {
    out.push_back({name, shape, std::vector<float>(v.begin(), v.end())});
  });
  out.push_back({"asp.c", {1}, {static_cast<float>(asp.c)}});
  out.push_back({"amsoftmax.weight",
                 {static_cast<std::uint32_t>(class_weights.rows), static_cast<std::uint32_t>(class_weights.cols)},
                 std::vector<float>(class_weights.data.begin(), class_weights.data.end())});
  return out;
}

ParameterSet ParameterSet::from_named_arrays(const ModelConfig& config, std::span<const NamedArray> arrays) {
  // Build the layout from the config, then fill every array by name.
  ParameterSet p = init_params(config, 0);
  for_each_array(p, [&](const std::string& name, const std::vector<std::uint32_t>& shape, std::vector<double>& v,
                        bool) {
    const NamedArray& a = find_array(arrays, name);
    if (a.shape != shape) throw DataError("parameter '" + name + "': shape does not match model config");
    v.assign(a.values.begin(), a.values.end());
  });
  const NamedArray& c = find_array(arrays, "asp.c");
  if (c.values.size() != 1) throw DataError("parameter 'asp.c': expected a scalar");
  p.asp.c = c.values[0];
  const NamedArray& w = find_array(arrays, "amsoftmax.weight");
  if (w.shape != std::vector<std::uint32_t>{static_cast<std::uint32_t>(config.n_classes),
                                            static_cast<std::uint32_t>(config.embedding_dim)})
    throw DataError("parameter 'amsoftmax.weight': shape does not match model config");
  p.class_weights.data.assign(w.values.begin(), w.values.end());
  return p;
}

bool ParameterSet::operator==(const ParameterSet& o) const {
  return config == o.config && to_named_arrays() == o.to_named_arrays();
}

namespace {

struct Extent {
  std::uint64_t f;
  std::uint64_t t;
};

}  // namespace

std::uint64_t count_params(const ModelConfig& config, bool include_classifier) {
  config.validate();
  auto convbn = [](std::uint64_t in, std::uint64_t out, std::uint64_t k) { return in * out * k * k + 2 * out; };
  std::uint64_t n = convbn(1, config.stem_channels, config.stem_kernel);
  std::uint64_t in = config.stem_channels;
  for (const BlockSpec& spec : config.blocks) {
    const std::uint64_t sub = config.subset_width(spec);
    const std::uint64_t width = config.module_width(spec);
    const std::uint64_t out = spec.out_channels;
    for (int r = 0; r < spec.repeats; ++r) {
      const int stride = r == 0 ? spec.stride : 1;
      n += convbn(in, width, 1);
      n += (config.scale - 1) * convbn(sub, sub, 3);
      n += convbn(width, out, 1);
      if (stride != 1 || in != out) n += convbn(in, out, 1);
      in = out;
    }
  }
  const std::uint64_t H = config.asp_hidden;
  n += H * in + H + H + 1;
  n += 2 * in * config.embedding_dim + config.embedding_dim;
  if (include_classifier) n += static_cast<std::uint64_t>(config.n_classes) * config.embedding_dim;
  return n;
}

std::uint64_t count_macs(const ModelConfig& config, int input_frames) {
  config.validate();
  if (input_frames < min_frames(config)) throw DataError("count_macs: utterance too short for model");
  auto out_len = [](std::uint64_t in, int k, int s, int p) { return (in + 2 * p - k) / s + 1; };
  Extent e{out_len(config.n_mels, config.stem_kernel, config.stem_stride_freq, config.stem_padding),
           out_len(static_cast<std::uint64_t>(input_frames), config.stem_kernel, config.stem_stride_time,
                   config.stem_padding)};
  const std::uint64_t k2 = static_cast<std::uint64_t>(config.stem_kernel) * config.stem_kernel;
  std::uint64_t macs = config.stem_channels * e.f * e.t * k2;
  std::uint64_t in = config.stem_channels;
  for (const BlockSpec& spec : config.blocks) {
    const std::uint64_t sub = config.subset_width(spec);
    const std::uint64_t width = config.module_width(spec);
    const std::uint64_t out = spec.out_channels;
    for (int r = 0; r < spec.repeats; ++r) {
      const int stride = r == 0 ? spec.stride : 1;
      e = {out_len(e.f, 1, stride, 0), out_len(e.t, 1, stride, 0)};
      const std::uint64_t pos = e.f * e.t;
      macs += pos * in * width;
      macs += pos * (config.scale - 1) * sub * sub * 9;
      macs += pos * width * out;
      if (stride != 1 || in != out) macs += pos * in * out;
      in = out;
    }
  }
  const std::uint64_t H = config.asp_hidden;
  macs += e.t * (H * in + H);
  macs += 2 * in * config.embedding_dim;
  return macs;
}

}  // namespace adaptsv
