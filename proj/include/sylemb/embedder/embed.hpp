// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sylemb/corpus/embedding_table.hpp"
#include "sylemb/corpus/resolution.hpp"
#include "sylemb/embedder/model.hpp"
#include "sylemb/nn/ops.hpp"
#include "sylemb/utf8.hpp"

namespace sylemb {

struct WordResolution {
  std::string word;
  ResolveReason reason;
  bool embedded = false;
};

struct EmbedOutcome {
  std::optional<std::vector<double>> vector;
  std::vector<std::string> missing_words;  // unique, in phrase order
  std::vector<WordResolution> words;

  bool ok() const { return vector.has_value(); }
};

using EmbedFn = std::function<EmbedOutcome(std::string_view phrase)>;

// Lowercased words of a phrase, split on spaces and underscores.
inline std::vector<std::string> phrase_words(std::string_view phrase) {
  const std::string lower = utf8::to_lower(phrase);
  std::vector<std::string> out;
  std::string cur;
  for (char c : lower) {
    if (c == ' ' || c == '_' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

namespace detail {

inline void note_missing(EmbedOutcome& out, const std::string& word) {
  for (const auto& w : out.missing_words) {
    if (w == word) return;
  }
  out.missing_words.push_back(word);
}

// Sums unit word vectors and normalizes; a single word is returned as is.
inline EmbedOutcome combine(EmbedOutcome out, const std::vector<std::vector<double>>& parts) {
  if (!out.missing_words.empty() || parts.empty()) return out;
  if (parts.size() == 1) {
    out.vector = parts.front();
    return out;
  }
  std::vector<double> sum(parts.front().size(), 0.0);
  for (const auto& p : parts) {
    for (std::size_t a = 0; a < sum.size(); ++a) sum[a] += p[a];
  }
  try {
    out.vector = nn::l2_normalize(sum);
  } catch (const ZeroNormError&) {
    out.missing_words.push_back(out.words.front().word);
  }
  return out;
}

}  // namespace detail

// Composes a unit vector for every word of the phrase using decompositions
// from `resolver`. Any unresolvable word makes the whole phrase missing.
inline EmbedOutcome embed(const EmbedderModel& model, std::string_view phrase, const Resolver& resolver) {
  EmbedOutcome out;
  std::vector<std::vector<double>> parts;
  for (const auto& word : phrase_words(phrase)) {
    WordResolution wr{word, ResolveReason::not_in_table};
    const Resolution r = resolver(word);
    wr.reason = r.reason;
    if (r.ok()) {
      std::vector<int> ids;
      for (const auto& v : model.marking.apply(r.decomposition->syllables)) {
        const auto id = model.vocab.id(v);
        if (!id) {
          wr.reason = ResolveReason::unknown_syllable;
          ids.clear();
          break;
        }
        ids.push_back(*id);
      }
      if (!ids.empty()) {
        try {
          parts.push_back(compose(model, ids));
          wr.embedded = true;
        } catch (const ZeroNormError&) {
          wr.reason = ResolveReason::zero_norm;
        }
      }
    }
    if (!wr.embedded) detail::note_missing(out, word);
    out.words.push_back(std::move(wr));
  }
  return detail::combine(std::move(out), parts);
}

// Embedding lookup against a fixed table. The whole phrase is tried first
// with spaces joined by '_', then word by word.
inline EmbedOutcome embed_with_table(const EmbeddingTable& table, std::string_view phrase) {
  EmbedOutcome out;
  const auto words = phrase_words(phrase);
  if (words.size() > 1) {
    std::string joined;
    for (std::size_t i = 0; i < words.size(); ++i) joined += (i ? "_" : "") + words[i];
    if (const auto v = table.find(joined)) {
      try {
        out.vector = nn::l2_normalize(*v);
        out.words.push_back({joined, ResolveReason::table, true});
        return out;
      } catch (const ZeroNormError&) {
      }
    }
  }
  std::vector<std::vector<double>> parts;
  for (const auto& word : words) {
    WordResolution wr{word, ResolveReason::not_in_table};
    if (const auto v = table.find(word)) {
      wr.reason = ResolveReason::table;
      try {
        parts.push_back(nn::l2_normalize(*v));
        wr.embedded = true;
      } catch (const ZeroNormError&) {
        wr.reason = ResolveReason::zero_norm;
      }
    }
    if (!wr.embedded) detail::note_missing(out, word);
    out.words.push_back(std::move(wr));
  }
  return detail::combine(std::move(out), parts);
}

}  // namespace sylemb
