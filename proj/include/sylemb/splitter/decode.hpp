// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sylemb/corpus/decomposition.hpp"
#include "sylemb/nn/tape.hpp"
#include "sylemb/splitter/model.hpp"
#include "sylemb/utf8.hpp"

namespace sylemb {

enum class DecodeStatus { ok, unknown_character, no_eos, invalid_output };

inline std::string_view to_string(DecodeStatus s) {
  switch (s) {
    case DecodeStatus::ok: return "ok";
    case DecodeStatus::unknown_character: return "unknown-character";
    case DecodeStatus::no_eos: return "no-eos";
    case DecodeStatus::invalid_output: return "invalid-output";
  }
  return "?";
}

struct DecodeResult {
  DecodeStatus status = DecodeStatus::invalid_output;
  std::optional<Decomposition> decomposition;
  std::string raw;  // emitted text before EOS, delimiters included

  bool ok() const { return status == DecodeStatus::ok; }
};

// Splits decoder text on '-'. Empty pieces (leading, trailing or doubled
// delimiters) and empty output are invalid.
inline DecodeResult parse_decoded(const std::string& word, const std::string& text) {
  DecodeResult r;
  r.raw = text;
  Decomposition d;
  d.word = word;
  std::size_t start = 0;
  while (true) {
    const auto dash = text.find('-', start);
    const auto piece = text.substr(start, dash == std::string::npos ? std::string::npos : dash - start);
    if (piece.empty()) {
      r.status = DecodeStatus::invalid_output;
      return r;
    }
    d.syllables.push_back(piece);
    if (dash == std::string::npos) break;
    start = dash + 1;
  }
  r.status = DecodeStatus::ok;
  r.decomposition = std::move(d);
  return r;
}

inline std::size_t default_max_decode_len(const std::string& word) {
  const auto cps = utf8::decode(word);
  const std::size_t n = cps ? cps->size() : word.size();
  return 2 * n + 2;
}

// Argmax decoding from BOS until EOS or `max_len` emitted tokens.
inline DecodeResult greedy_decode(const SplitterModel& model, const std::string& word,
                                  std::optional<std::size_t> max_len = std::nullopt) {
  DecodeResult r;
  std::vector<int> source;
  try {
    source = model.vocab.encode_word(word);
  } catch (const UnknownCharacterError&) {
    r.status = DecodeStatus::unknown_character;
    return r;
  }
  const std::size_t limit = max_len.value_or(default_max_decode_len(word));
  auto& m = const_cast<SplitterModel&>(model);  // graph building needs mutable refs; nothing is written
  nn::Tape tape(false);
  SplitterGraph graph(m, tape);
  const auto memory = graph.encode(source);
  std::vector<int> prefix{CharVocab::kBos};
  std::string text;
  for (std::size_t step = 0; step < limit; ++step) {
    const auto logits = graph.decode(memory, prefix);
    const auto& L = tape.value(logits);
    const auto last = L.row(L.rows() - 1);
    int best = 0;
    for (std::size_t j = 1; j < last.size(); ++j) {
      if (last[j] > last[static_cast<std::size_t>(best)]) best = static_cast<int>(j);
    }
    if (best == CharVocab::kEos) return parse_decoded(word, text);
    if (best == CharVocab::kPad || best == CharVocab::kBos) {
      r.status = DecodeStatus::invalid_output;
      r.raw = text;
      return r;
    }
    text += model.vocab.token_text(best);
    prefix.push_back(best);
  }
  r.status = DecodeStatus::no_eos;
  r.raw = text;
  return r;
}

// True iff the syllables concatenate to exactly `word`.
inline bool validate_roundtrip(const std::string& word, const Decomposition& d) {
  return !d.syllables.empty() && concat(d.syllables) == word;
}

// Fraction of words whose greedy decode equals the reference syllables.
inline double splitter_accuracy(const SplitterModel& model, const DecompositionDataset& eval) {
  if (eval.empty()) throw std::invalid_argument("evaluation set is empty");
  std::size_t hits = 0;
  for (const auto& [word, ref] : eval.items()) {
    const auto r = greedy_decode(model, word);
    if (r.ok() && r.decomposition->syllables == ref.syllables) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(eval.size());
}

}  // namespace sylemb
