// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sylemb/corpus/training_set.hpp"
#include "sylemb/errors.hpp"
#include "sylemb/nn/adam.hpp"
#include "sylemb/nn/ops.hpp"
#include "sylemb/nn/parameter.hpp"
#include "sylemb/random.hpp"

namespace sylemb {

enum class ComposerKind { vanilla, attention1, attention2 };

inline std::string_view to_string(ComposerKind k) {
  switch (k) {
    case ComposerKind::vanilla: return "vanilla";
    case ComposerKind::attention1: return "attention1";
    case ComposerKind::attention2: return "attention2";
  }
  return "?";
}

inline ComposerKind parse_composer_kind(std::string_view s) {
  if (s == "vanilla") return ComposerKind::vanilla;
  if (s == "attention1") return ComposerKind::attention1;
  if (s == "attention2") return ComposerKind::attention2;
  throw ConfigError("unknown model kind '" + std::string(s) +
                    "' (expected vanilla, attention1 or attention2)");
}

struct EmbedderConfig {
  ComposerKind kind = ComposerKind::vanilla;
  std::size_t dim = 300;      // syllable embedding width
  std::size_t out_dim = 300;  // composed vector width; differs from dim only for attention2
  int epochs = 30;
  std::uint64_t seed = 0;
  double init_scale = 0.1;
  double early_stop_tol = 1e-6;  // stop when the epoch loss improves by less; 0 disables
  nn::AdamConfig adam;

  // Default widths for a source table of dimension `source_dim`.
  static EmbedderConfig for_kind(ComposerKind kind, std::size_t source_dim = 300) {
    EmbedderConfig c;
    c.kind = kind;
    c.out_dim = source_dim;
    c.dim = kind == ComposerKind::attention2 ? source_dim * 2 / 3 : source_dim;
    return c;
  }

  void validate() const {
    if (dim == 0 || out_dim == 0) throw ConfigError("embedding dimensions must be positive");
    if (epochs < 1) throw ConfigError("epochs must be at least 1");
    if (kind == ComposerKind::attention2) {
      if (dim >= out_dim) throw ConfigError("attention2 requires an inner dimension below the output dimension");
    } else if (dim != out_dim) {
      throw ConfigError(std::string(to_string(kind)) + " requires dim == out_dim");
    }
    if (!(init_scale > 0.0)) throw ConfigError("init_scale must be positive");
    adam.validate();
  }
};

// Total trainable scalars: V*D syllable rows, plus 2D^2 + D for the attention
// scorer, plus D*out + out for the attention2 expansion layer.
inline std::int64_t param_count(ComposerKind kind, std::int64_t vocab_size, std::int64_t dim,
                                std::int64_t out_dim) {
  std::int64_t n = vocab_size * dim;
  if (kind != ComposerKind::vanilla) n += 2 * dim * dim + dim;
  if (kind == ComposerKind::attention2) n += dim * out_dim + out_dim;
  return n;
}

class EmbedderModel {
 public:
  ComposerKind kind = ComposerKind::vanilla;
  std::size_t dim = 0;
  std::size_t out_dim = 0;
  SyllableVocab vocab;
  VariantMarking marking;

  nn::Parameter table;  // V x D
  nn::Parameter w_q;    // D x D
  nn::Parameter w_k;    // D x D
  nn::Parameter b_k;    // D
  nn::Parameter w_e;    // D x out
  nn::Parameter b_e;    // out

  EmbedderModel() = default;

  // Zero-initialised model with the right shapes.
  EmbedderModel(ComposerKind k, std::size_t d, std::size_t out, SyllableVocab v, VariantMarking m)
      : kind(k), dim(d), out_dim(out), vocab(std::move(v)), marking(std::move(m)) {
    table = nn::Parameter("syllable_table", {vocab.size(), dim});
    table.grad = nn::Tensor();  // table gradients are row-sparse, see EmbedderGradients
    if (has_attention()) {
      w_q = nn::Parameter("W_q", {dim, dim});
      w_k = nn::Parameter("W_k", {dim, dim});
      b_k = nn::Parameter("b_k", {dim});
    }
    if (kind == ComposerKind::attention2) {
      w_e = nn::Parameter("W_e", {dim, out_dim});
      b_e = nn::Parameter("b_e", {out_dim});
    }
  }

  // Syllable rows and W_q, W_k ~ U(-s/sqrt(D), s/sqrt(D)); W_e ~ U(-1/sqrt(D),
  // 1/sqrt(D)); biases zero.
  void initialize(Rng& rng, double init_scale) {
    const double bound = init_scale / std::sqrt(static_cast<double>(dim));
    table.init_uniform(rng, bound);
    if (has_attention()) {
      w_q.init_uniform(rng, bound);
      w_k.init_uniform(rng, bound);
      b_k.value.fill(0.0);
    }
    if (kind == ComposerKind::attention2) {
      w_e.init_uniform(rng, 1.0 / std::sqrt(static_cast<double>(dim)));
      b_e.value.fill(0.0);
    }
  }

  bool has_attention() const { return kind != ComposerKind::vanilla; }

  // Parameters in serialization order.
  std::vector<nn::Parameter*> parameters() {
    std::vector<nn::Parameter*> ps{&table};
    if (has_attention()) {
      ps.push_back(&w_q);
      ps.push_back(&w_k);
      ps.push_back(&b_k);
    }
    if (kind == ComposerKind::attention2) {
      ps.push_back(&w_e);
      ps.push_back(&b_e);
    }
    return ps;
  }

  std::vector<const nn::Parameter*> parameters() const {
    std::vector<const nn::Parameter*> out;
    for (auto* p : const_cast<EmbedderModel*>(this)->parameters()) out.push_back(p);
    return out;
  }

  std::int64_t parameter_count() const {
    return param_count(kind, static_cast<std::int64_t>(vocab.size()), static_cast<std::int64_t>(dim),
                       static_cast<std::int64_t>(out_dim));
  }

  std::span<const double> syllable(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= vocab.size()) {
      throw std::out_of_range("syllable id " + std::to_string(id) + " out of range");
    }
    return table.value.row(static_cast<std::size_t>(id));
  }
};

// Intermediate values of one composition, kept for the backward pass.
struct CompositionTrace {
  std::vector<double> context;  // mean of syllable rows
  std::vector<double> query;    // W_q * context
  std::vector<double> scores;   // z_i
  std::vector<double> weights;  // softmax(z)
  std::vector<double> pooled;   // sum (or attention-weighted sum) of rows
  std::vector<double> pre_norm; // vector that gets normalized
  double norm = 0.0;
  std::vector<double> output;   // unit vector
};

namespace detail {

inline void check_ids(const EmbedderModel& m, std::span<const int> ids) {
  if (ids.empty()) throw std::invalid_argument("composition of an empty syllable list");
  for (int id : ids) (void)m.syllable(id);
}

inline void finish(CompositionTrace& tr) {
  tr.norm = nn::l2_norm(tr.pre_norm);
  if (!(tr.norm > 0.0) || !std::isfinite(tr.norm)) {
    throw ZeroNormError("composed vector has zero norm");
  }
  tr.output = tr.pre_norm;
  for (auto& x : tr.output) x /= tr.norm;
}

}  // namespace detail

// normalize(sum of syllable rows).
inline CompositionTrace trace_vanilla(const EmbedderModel& m, std::span<const int> ids) {
  detail::check_ids(m, ids);
  CompositionTrace tr;
  tr.pooled.assign(m.dim, 0.0);
  for (int id : ids) {
    const auto row = m.syllable(id);
    for (std::size_t a = 0; a < m.dim; ++a) tr.pooled[a] += row[a];
  }
  tr.pre_norm = tr.pooled;
  detail::finish(tr);
  return tr;
}

// Attention pooling: context c = mean(s_i), q = W_q c,
// z_i = q . (W_k s_i + b_k) / sqrt(D), alpha = softmax(z), p = sum alpha_i s_i.
// attention1 normalizes p; attention2 normalizes W_e^T p + b_e.
inline CompositionTrace trace_attention(const EmbedderModel& m, std::span<const int> ids,
                                        bool expand = true) {
  if (!m.has_attention()) throw std::logic_error("model has no attention parameters");
  detail::check_ids(m, ids);
  const std::size_t D = m.dim;
  const std::size_t n = ids.size();
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(D));
  CompositionTrace tr;
  tr.context.assign(D, 0.0);
  for (int id : ids) {
    const auto row = m.syllable(id);
    for (std::size_t a = 0; a < D; ++a) tr.context[a] += row[a];
  }
  for (auto& x : tr.context) x /= static_cast<double>(n);

  tr.query.assign(D, 0.0);
  const auto& Wq = m.w_q.value;
  for (std::size_t a = 0; a < D; ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < D; ++b) s += Wq[a * D + b] * tr.context[b];
    tr.query[a] = s;
  }
  // q . (W_k s + b_k) = (W_k^T q) . s + q . b_k
  std::vector<double> r(D, 0.0);
  const auto& Wk = m.w_k.value;
  for (std::size_t a = 0; a < D; ++a) {
    const double qa = tr.query[a];
    if (qa == 0.0) continue;
    for (std::size_t b = 0; b < D; ++b) r[b] += Wk[a * D + b] * qa;
  }
  const double qb = nn::dot(tr.query, m.b_k.value.span());
  tr.scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) tr.scores[i] = (nn::dot(r, m.syllable(ids[i])) + qb) * inv_sqrt_d;
  tr.weights = nn::softmax(tr.scores);

  tr.pooled.assign(D, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = m.syllable(ids[i]);
    for (std::size_t a = 0; a < D; ++a) tr.pooled[a] += tr.weights[i] * row[a];
  }
  if (m.kind == ComposerKind::attention2 && expand) {
    const std::size_t O = m.out_dim;
    tr.pre_norm.assign(m.b_e.value.data().begin(), m.b_e.value.data().end());
    const auto& We = m.w_e.value;
    for (std::size_t a = 0; a < D; ++a) {
      const double pa = tr.pooled[a];
      for (std::size_t o = 0; o < O; ++o) tr.pre_norm[o] += pa * We[a * O + o];
    }
  } else {
    tr.pre_norm = tr.pooled;
  }
  detail::finish(tr);
  return tr;
}

inline std::vector<double> compose_vanilla(const EmbedderModel& m, std::span<const int> ids) {
  return trace_vanilla(m, ids).output;
}

inline std::vector<double> compose_attention(const EmbedderModel& m, std::span<const int> ids) {
  return trace_attention(m, ids).output;
}

inline std::vector<double> compose(const EmbedderModel& m, std::span<const int> ids) {
  return m.has_attention() ? compose_attention(m, ids) : compose_vanilla(m, ids);
}

}  // namespace sylemb
