// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>

#include "sylemb/corpus/resolution.hpp"
#include "sylemb/corpus/training_set.hpp"
#include "sylemb/splitter/decode.hpp"

namespace sylemb {

using Decoder = std::function<DecodeResult(const std::string& word)>;

inline Decoder model_decoder(const SplitterModel& model) {
  return [&model](const std::string& word) { return greedy_decode(model, word); };
}

// True iff every syllable, after start/end marking, has an embedding row.
inline bool syllables_known(const Decomposition& d, const SyllableVocab& vocab, const VariantMarking& marking) {
  for (const auto& v : marking.apply(d.syllables)) {
    if (!vocab.contains(v)) return false;
  }
  return true;
}

// Table lookup, then splitter prediction, round-trip check and vocabulary
// check. Table entries are vocabulary-checked as well, so every returned
// decomposition is embeddable.
inline Resolution resolve_decomposition(const std::string& word, const DecompositionDataset& table,
                                        const Decoder* decoder, const SyllableVocab& vocab,
                                        const VariantMarking& marking) {
  Resolution r;
  if (const auto* d = table.find(word)) {
    if (!syllables_known(*d, vocab, marking)) {
      r.reason = ResolveReason::unknown_syllable;
      return r;
    }
    r.decomposition = *d;
    r.reason = ResolveReason::table;
    return r;
  }
  if (!decoder || !*decoder) {
    r.reason = ResolveReason::not_in_table;
    return r;
  }
  const DecodeResult dec = (*decoder)(word);
  if (!dec.ok()) {
    r.reason = ResolveReason::decode_failure;
    return r;
  }
  if (!validate_roundtrip(word, *dec.decomposition)) {
    r.reason = ResolveReason::roundtrip_failure;
    return r;
  }
  if (!syllables_known(*dec.decomposition, vocab, marking)) {
    r.reason = ResolveReason::unknown_syllable;
    return r;
  }
  r.decomposition = dec.decomposition;
  r.decomposition->word = word;
  r.reason = ResolveReason::splitter;
  return r;
}

inline Resolution resolve_decomposition(const std::string& word, const DecompositionDataset& table,
                                        const SplitterModel* model, const SyllableVocab& vocab,
                                        const VariantMarking& marking) {
  if (!model) return resolve_decomposition(word, table, static_cast<const Decoder*>(nullptr), vocab, marking);
  const Decoder dec = model_decoder(*model);
  return resolve_decomposition(word, table, &dec, vocab, marking);
}

// Resolver for embed(): owns its decoder; `table` and the vocabulary must
// outlive it.
inline Resolver make_resolver(const DecompositionDataset& table, Decoder decoder, const SyllableVocab& vocab,
                              const VariantMarking& marking) {
  return [&table, decoder = std::move(decoder), &vocab, &marking](const std::string& word) {
    return resolve_decomposition(word, table, decoder ? &decoder : nullptr, vocab, marking);
  };
}

}  // namespace sylemb
