// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "sylemb/nn/parameter.hpp"
#include "sylemb/nn/tape.hpp"
#include "sylemb/random.hpp"
#include "sylemb/splitter/char_vocab.hpp"
#include "sylemb/splitter/config.hpp"

namespace sylemb {

// Multi-head attention with a packed d x 3d input projection (Q | K | V).
struct AttentionBlock {
  nn::Parameter w_in, b_in, w_out, b_out;
};

struct FeedForward {
  nn::Parameter w1, b1, w2, b2;
};

struct NormParams {
  nn::Parameter gain, bias;
};

struct EncoderLayer {
  AttentionBlock self_attn;
  FeedForward ff;
  NormParams norm1, norm2;
};

struct DecoderLayer {
  AttentionBlock self_attn;
  AttentionBlock cross_attn;
  FeedForward ff;
  NormParams norm1, norm2, norm3;
};

// Post-norm encoder-decoder transformer over character tokens. Source and
// target share one embedding table scaled by sqrt(d); sinusoidal positions
// are added to both sides.
class SplitterModel {
 public:
  SplitterConfig config;
  CharVocab vocab;

  nn::Parameter embedding;  // |vocab| x d
  std::vector<EncoderLayer> encoder;
  std::vector<DecoderLayer> decoder;
  NormParams encoder_norm, decoder_norm;
  nn::Parameter out_w;  // d x |vocab|
  nn::Parameter out_b;  // |vocab|

  SplitterModel() = default;

  SplitterModel(const SplitterConfig& cfg, CharVocab v) : config(cfg), vocab(std::move(v)) {
    config.validate();
    const std::size_t d = width();
    const std::size_t h = static_cast<std::size_t>(config.hidden);
    const std::size_t V = vocab.size();
    embedding = nn::Parameter("embedding", {V, d});
    for (int l = 0; l < config.layers; ++l) {
      const std::string p = "encoder." + std::to_string(l) + ".";
      EncoderLayer e;
      e.self_attn = make_attention(p + "self_attn.", d);
      e.ff = make_ff(p + "ff.", d, h);
      e.norm1 = make_norm(p + "norm1.", d);
      e.norm2 = make_norm(p + "norm2.", d);
      encoder.push_back(std::move(e));
    }
    for (int l = 0; l < config.layers; ++l) {
      const std::string p = "decoder." + std::to_string(l) + ".";
      DecoderLayer dl;
      dl.self_attn = make_attention(p + "self_attn.", d);
      dl.cross_attn = make_attention(p + "cross_attn.", d);
      dl.ff = make_ff(p + "ff.", d, h);
      dl.norm1 = make_norm(p + "norm1.", d);
      dl.norm2 = make_norm(p + "norm2.", d);
      dl.norm3 = make_norm(p + "norm3.", d);
      decoder.push_back(std::move(dl));
    }
    encoder_norm = make_norm("encoder_norm.", d);
    decoder_norm = make_norm("decoder_norm.", d);
    out_w = nn::Parameter("out.w", {d, V});
    out_b = nn::Parameter("out.b", {V});
  }

  std::size_t width() const { return static_cast<std::size_t>(config.embedding); }

  // Xavier-uniform matrices, zero biases, unit layer-norm gains.
  void initialize(Rng& rng) {
    for (auto* p : parameters()) {
      const auto& shape = p->value.shape();
      const bool is_gain = p->name.size() > 4 && p->name.compare(p->name.size() - 4, 4, "gain") == 0;
      if (shape.size() == 2) {
        const double bound = std::sqrt(6.0 / static_cast<double>(shape[0] + shape[1]));
        p->init_uniform(rng, bound);
      } else {
        p->value.fill(is_gain ? 1.0 : 0.0);
      }
    }
  }

  // All parameters in serialization order.
  std::vector<nn::Parameter*> parameters() {
    std::vector<nn::Parameter*> ps{&embedding};
    auto attn = [&ps](AttentionBlock& a) {
      for (auto* p : {&a.w_in, &a.b_in, &a.w_out, &a.b_out}) ps.push_back(p);
    };
    auto ff = [&ps](FeedForward& f) {
      for (auto* p : {&f.w1, &f.b1, &f.w2, &f.b2}) ps.push_back(p);
    };
    auto norm = [&ps](NormParams& n) {
      ps.push_back(&n.gain);
      ps.push_back(&n.bias);
    };
    for (auto& e : encoder) {
      attn(e.self_attn);
      ff(e.ff);
      norm(e.norm1);
      norm(e.norm2);
    }
    for (auto& dl : decoder) {
      attn(dl.self_attn);
      attn(dl.cross_attn);
      ff(dl.ff);
      norm(dl.norm1);
      norm(dl.norm2);
      norm(dl.norm3);
    }
    norm(encoder_norm);
    norm(decoder_norm);
    ps.push_back(&out_w);
    ps.push_back(&out_b);
    return ps;
  }

  std::vector<const nn::Parameter*> parameters() const {
    std::vector<const nn::Parameter*> out;
    for (auto* p : const_cast<SplitterModel*>(this)->parameters()) out.push_back(p);
    return out;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto* p : parameters()) n += p->size();
    return n;
  }

  void zero_grad() {
    for (auto* p : parameters()) p->zero_grad();
  }

 private:
  static AttentionBlock make_attention(const std::string& p, std::size_t d) {
    return {nn::Parameter(p + "w_in", {d, 3 * d}), nn::Parameter(p + "b_in", {3 * d}),
            nn::Parameter(p + "w_out", {d, d}), nn::Parameter(p + "b_out", {d})};
  }
  static FeedForward make_ff(const std::string& p, std::size_t d, std::size_t h) {
    return {nn::Parameter(p + "w1", {d, h}), nn::Parameter(p + "b1", {h}), nn::Parameter(p + "w2", {h, d}),
            nn::Parameter(p + "b2", {d})};
  }
  static NormParams make_norm(const std::string& p, std::size_t d) {
    return {nn::Parameter(p + "gain", {d}), nn::Parameter(p + "bias", {d})};
  }
};

inline nn::Tensor sinusoidal_positions(std::size_t n, std::size_t d) {
  nn::Tensor pe = nn::Tensor::matrix(n, d);
  for (std::size_t pos = 0; pos < n; ++pos) {
    for (std::size_t i = 0; i < d; i += 2) {
      const double freq = std::pow(10000.0, -static_cast<double>(i) / static_cast<double>(d));
      pe.at(pos, i) = std::sin(static_cast<double>(pos) * freq);
      if (i + 1 < d) pe.at(pos, i + 1) = std::cos(static_cast<double>(pos) * freq);
    }
  }
  return pe;
}

// Builds the forward graph on a tape. `rng` may be null when dropout is 0.
class SplitterGraph {
 public:
  using Var = nn::Tape::Var;

  SplitterGraph(SplitterModel& model, nn::Tape& tape, double dropout = 0.0, Rng* rng = nullptr)
      : m_(model), tape_(tape), dropout_(dropout), rng_(rng) {
    if (dropout_ > 0.0 && !rng_) throw std::invalid_argument("dropout requires a random generator");
  }

  Var embed(std::span<const int> tokens) {
    const std::size_t d = m_.width();
    Var x = tape_.gather_rows(tape_.param(m_.embedding), tokens);
    x = tape_.scale(x, std::sqrt(static_cast<double>(d)));
    x = tape_.add(x, tape_.constant(sinusoidal_positions(tokens.size(), d)));
    return drop(x);
  }

  Var encode(std::span<const int> source) {
    Var x = embed(source);
    for (auto& layer : m_.encoder) {
      x = norm(tape_.add(x, drop(attention(layer.self_attn, x, x, false))), layer.norm1);
      x = norm(tape_.add(x, drop(feed_forward(layer.ff, x))), layer.norm2);
    }
    return norm(x, m_.encoder_norm);
  }

  // Logits (n x |vocab|) for each decoder input position.
  Var decode(Var memory, std::span<const int> target_in) {
    Var y = embed(target_in);
    for (auto& layer : m_.decoder) {
      y = norm(tape_.add(y, drop(attention(layer.self_attn, y, y, true))), layer.norm1);
      y = norm(tape_.add(y, drop(attention(layer.cross_attn, y, memory, false))), layer.norm2);
      y = norm(tape_.add(y, drop(feed_forward(layer.ff, y))), layer.norm3);
    }
    y = norm(y, m_.decoder_norm);
    return tape_.add_row(tape_.matmul(y, tape_.param(m_.out_w)), tape_.param(m_.out_b));
  }

  // Teacher-forced summed cross entropy of target[1:] given target[:-1].
  Var loss(std::span<const int> source, std::span<const int> target) {
    if (target.size() < 2) throw std::invalid_argument("target needs at least BOS and EOS");
    Var memory = encode(source);
    Var logits = decode(memory, target.first(target.size() - 1));
    return tape_.cross_entropy_sum(logits, target.subspan(1));
  }

 private:
  Var drop(Var x) { return dropout_ > 0.0 ? tape_.dropout(x, dropout_, *rng_) : x; }

  Var norm(Var x, NormParams& n) { return tape_.layer_norm(x, tape_.param(n.gain), tape_.param(n.bias)); }

  Var feed_forward(FeedForward& f, Var x) {
    Var h = tape_.relu(tape_.add_row(tape_.matmul(x, tape_.param(f.w1)), tape_.param(f.b1)));
    h = drop(h);
    return tape_.add_row(tape_.matmul(h, tape_.param(f.w2)), tape_.param(f.b2));
  }

  Var attention(AttentionBlock& a, Var query_in, Var kv_in, bool causal) {
    const std::size_t d = m_.width();
    const std::size_t heads = static_cast<std::size_t>(m_.config.heads);
    const std::size_t dh = d / heads;
    Var w = tape_.param(a.w_in);
    Var b = tape_.param(a.b_in);
    auto project = [&](Var x, std::size_t part) {
      return tape_.add_row(tape_.matmul(x, tape_.slice_cols(w, part * d, d)), tape_.slice_cols(b, part * d, d));
    };
    Var q = project(query_in, 0);
    Var k = project(kv_in, 1);
    Var v = project(kv_in, 2);
    const double inv = 1.0 / std::sqrt(static_cast<double>(dh));
    std::vector<Var> outs;
    outs.reserve(heads);
    for (std::size_t h = 0; h < heads; ++h) {
      Var qh = tape_.slice_cols(q, h * dh, dh);
      Var kh = tape_.slice_cols(k, h * dh, dh);
      Var vh = tape_.slice_cols(v, h * dh, dh);
      Var p = tape_.softmax_rows(tape_.scale(tape_.matmul_nt(qh, kh), inv), causal);
      outs.push_back(tape_.matmul(drop(p), vh));
    }
    Var o = heads == 1 ? outs.front() : tape_.concat_cols(outs);
    return tape_.add_row(tape_.matmul(o, tape_.param(a.w_out)), tape_.param(a.b_out));
  }

  SplitterModel& m_;
  nn::Tape& tape_;
  double dropout_;
  Rng* rng_;
};

}  // namespace sylemb
