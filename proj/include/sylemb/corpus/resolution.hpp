// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "sylemb/corpus/decomposition.hpp"

namespace sylemb {

// How a word's decomposition was obtained, or why it could not be.
enum class ResolveReason {
  table,              // found in the decomposition table
  splitter,           // predicted by the splitter and accepted
  not_in_table,       // unknown and no splitter available
  decode_failure,     // splitter produced no usable output
  roundtrip_failure,  // predicted syllables do not rejoin to the word
  unknown_syllable,   // a syllable variant has no embedding
  zero_norm,          // composition collapsed to the zero vector
};

inline std::string_view to_string(ResolveReason r) {
  switch (r) {
    case ResolveReason::table: return "table";
    case ResolveReason::splitter: return "splitter";
    case ResolveReason::not_in_table: return "not-in-table";
    case ResolveReason::decode_failure: return "decode-failure";
    case ResolveReason::roundtrip_failure: return "roundtrip-failure";
    case ResolveReason::unknown_syllable: return "unknown-syllable";
    case ResolveReason::zero_norm: return "zero-norm";
  }
  return "?";
}

struct Resolution {
  std::optional<Decomposition> decomposition;
  ResolveReason reason = ResolveReason::not_in_table;

  bool ok() const { return decomposition.has_value(); }
};

using Resolver = std::function<Resolution(const std::string& word)>;

// Looks words up in a decomposition table only.
inline Resolver table_resolver(const DecompositionDataset& table) {
  return [&table](const std::string& word) {
    Resolution r;
    if (const auto* d = table.find(word)) {
      r.decomposition = *d;
      r.reason = ResolveReason::table;
    }
    return r;
  };
}

}  // namespace sylemb
