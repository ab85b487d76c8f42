// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

// Shared fixtures for the unit and acceptance tests.

#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sylemb/corpus/decomposition.hpp"
#include "sylemb/corpus/embedding_table.hpp"
#include "sylemb/embedder/gradients.hpp"
#include "sylemb/embedder/model.hpp"
#include "sylemb/nn/gradcheck.hpp"
#include "sylemb/random.hpp"

namespace sylemb::testing {

// Words built from fixed-width three-letter syllables, so every word has a
// unique decomposition. Targets are normalized sums of hidden syllable
// vectors, which a vanilla model can represent exactly.
struct SyntheticCorpus {
  DecompositionDataset ds;
  EmbeddingTable emb;
  std::map<std::string, std::vector<double>> hidden;
  std::vector<std::string> words;
};

inline std::vector<std::string> synthetic_syllables(std::size_t n, Rng& rng) {
  static const std::string consonants = "bdfgklmnprstvz";
  static const std::string vowels = "aeiou";
  std::set<std::string> out;
  while (out.size() < n) {
    std::string s;
    s += consonants[rng.below(consonants.size())];
    s += vowels[rng.below(vowels.size())];
    s += consonants[rng.below(consonants.size())];
    out.insert(s);
  }
  return {out.begin(), out.end()};
}

inline SyntheticCorpus make_synthetic(std::size_t n_words, std::size_t n_syllables, std::size_t dim,
                                      std::uint64_t seed, std::size_t max_len = 4) {
  Rng rng(seed);
  SyntheticCorpus c;
  c.emb = EmbeddingTable(dim);
  const auto syl = synthetic_syllables(n_syllables, rng);
  for (const auto& s : syl) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    c.hidden[s] = v;
  }
  std::vector<Decomposition> items;
  std::set<std::string> seen;
  while (items.size() < n_words) {
    const std::size_t len = 1 + rng.below(max_len);
    Decomposition d;
    std::vector<double> sum(dim, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
      const auto& s = syl[rng.below(syl.size())];
      d.syllables.push_back(s);
      d.word += s;
      for (std::size_t a = 0; a < dim; ++a) sum[a] += c.hidden[s][a];
    }
    if (!seen.insert(d.word).second) continue;
    double norm = 0.0;
    for (double x : sum) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-9) continue;
    for (auto& x : sum) x /= norm;
    c.emb.add(d.word, sum);
    c.words.push_back(d.word);
    items.push_back(std::move(d));
  }
  c.ds = DecompositionDataset(items);
  return c;
}

// Model of the given kind with small random weights, including nonzero
// biases so every gradient path is exercised.
inline EmbedderModel random_model(ComposerKind kind, std::size_t vocab_size, std::size_t dim, std::size_t out_dim,
                                  Rng& rng, double scale = 0.8) {
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < vocab_size; ++i) tokens.push_back("s" + std::to_string(100 + i));
  EmbedderModel m(kind, dim, out_dim, SyllableVocab(tokens), {});
  for (auto* p : m.parameters()) p->init_uniform(rng, scale);
  return m;
}

// Gradient check of the summed per-example loss over `examples`.
inline nn::GradCheckReport embedder_gradcheck(EmbedderModel& m, const std::vector<std::vector<int>>& examples,
                                              const std::vector<std::vector<double>>& targets) {
  auto loss = [&] {
    double total = 0.0;
    EmbedderGradients g;
    for (std::size_t i = 0; i < examples.size(); ++i) total += loss_and_gradient(m, examples[i], targets[i], g);
    return total;
  };
  std::vector<std::vector<double>> grads;
  for (auto* p : m.parameters()) grads.emplace_back(p->value.size(), 0.0);
  EmbedderGradients g;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    loss_and_gradient(m, examples[i], targets[i], g);
    const auto table = g.dense_table(m.vocab.size(), m.dim);
    std::vector<const nn::Tensor*> dense{&g.w_q, &g.w_k, &g.b_k, &g.w_e, &g.b_e};
    for (std::size_t k = 0; k < table.size(); ++k) grads[0][k] += table[k];
    for (std::size_t p = 1; p < grads.size(); ++p) {
      for (std::size_t k = 0; k < grads[p].size(); ++k) grads[p][k] += (*dense[p - 1])[k];
    }
  }
  std::vector<std::span<double>> views;
  std::vector<std::span<const double>> analytic;
  auto params = m.parameters();
  for (std::size_t p = 0; p < params.size(); ++p) {
    views.push_back(params[p]->value.span());
    analytic.push_back(grads[p]);
  }
  return nn::check_gradient(loss, views, analytic);
}

// Correlation oracles: textbook two-pass product-moment formula in long
// double, and O(n^2) tie-averaged ranks.
inline std::optional<double> oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

inline std::vector<double> oracle_ranks(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double below = 0, equal = 0;
    for (double v : x) {
      if (v < x[i]) ++below;
      if (v == x[i]) ++equal;
    }
    r[i] = below + (equal + 1) / 2;
  }
  return r;
}

inline std::optional<double> oracle_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return oracle_pearson(oracle_ranks(x), oracle_ranks(y));
}

}  // namespace sylemb::testing
