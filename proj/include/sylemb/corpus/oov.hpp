// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sylemb/corpus/training_set.hpp"

namespace sylemb {

enum class OovScope { eval_only, global };

inline std::string_view to_string(OovScope s) {
  return s == OovScope::eval_only ? "eval-only" : "global";
}

inline OovScope parse_oov_scope(std::string_view s) {
  if (s == "eval-only") return OovScope::eval_only;
  if (s == "global") return OovScope::global;
  throw ConfigError("unknown OOV scope '" + std::string(s) + "' (expected eval-only or global)");
}

struct OovSplit {
  TrainingSet retained;
  std::vector<std::string> removed_words;
  std::int64_t min_count = 1;
  OovScope scope = OovScope::eval_only;
  // Removed words with a variant that no longer occurs in the retained set.
  std::vector<std::string> composability_violations;

  nlohmann::json summary() const {
    return {{"min_count", min_count},
            {"scope", to_string(scope)},
            {"removed", removed_words.size()},
            {"retained_words", retained.size()},
            {"retained_syllables", retained.vocab.size()},
            {"composability_violations", composability_violations}};
  }
};

// Removes words made up entirely of syllable variants that occur at least
// `min_count` times. Counts are token counts over the (variant-annotated)
// training set, so the result depends on the start/end fraction.
inline OovSplit make_oov_split(const TrainingSet& ts, const std::set<std::string>& eval_vocab,
                               std::int64_t min_count, OovScope scope = OovScope::eval_only) {
  if (min_count < 1) throw std::invalid_argument("min_count must be at least 1");
  const auto counts = ts.variant_counts();
  OovSplit split;
  split.min_count = min_count;
  split.scope = scope;
  split.retained.dim = ts.dim;
  split.retained.marking = ts.marking;
  std::vector<const TrainingExample*> removed;
  for (const auto& ex : ts.examples) {
    bool remove = scope == OovScope::global || eval_vocab.count(ex.word) != 0;
    if (remove) {
      for (const auto& s : ex.syllables) {
        if (counts.at(s) < min_count) {
          remove = false;
          break;
        }
      }
    }
    if (remove) {
      split.removed_words.push_back(ex.word);
      removed.push_back(&ex);
    } else {
      split.retained.examples.push_back(ex);
    }
  }
  if (split.retained.examples.empty()) {
    throw std::runtime_error("OOV split removed every training word");
  }
  split.retained.reindex();
  for (const auto* ex : removed) {
    for (const auto& s : ex->syllables) {
      if (!split.retained.vocab.contains(s)) {
        split.composability_violations.push_back(ex->word);
        break;
      }
    }
  }
  return split;
}

}  // namespace sylemb
