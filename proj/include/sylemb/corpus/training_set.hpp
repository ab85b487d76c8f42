// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "sylemb/corpus/char_filter.hpp"
#include "sylemb/corpus/decomposition.hpp"
#include "sylemb/corpus/embedding_table.hpp"
#include "sylemb/corpus/ranking.hpp"

namespace sylemb {

// Syllable-variant string <-> dense id. Ids follow lexicographic order of the
// variant strings.
class SyllableVocab {
 public:
  SyllableVocab() = default;

  explicit SyllableVocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (!index_.emplace(tokens_[i], static_cast<int>(i)).second) {
        throw std::invalid_argument("duplicate vocabulary entry: " + tokens_[i]);
      }
    }
  }

  static SyllableVocab from_set(const std::set<std::string>& tokens) {
    return SyllableVocab(std::vector<std::string>(tokens.begin(), tokens.end()));
  }

  std::optional<int> id(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const std::string& token) const { return index_.count(token) != 0; }
  const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

struct VariantConfig {
  double fraction = 0.0;
  std::string start_marker = "$";
  std::string end_marker = "#";

  void validate(const CharFilter& filter = CharFilter::standard()) const {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
      throw ConfigError("variant fraction must lie in [0, 1]");
    }
    for (const auto* m : {&start_marker, &end_marker}) {
      const auto cps = utf8::decode(*m);
      if (!cps || cps->size() != 1) throw ConfigError("variant marker must be a single character");
      if (filter.allows((*cps)[0])) {
        throw ConfigError("variant marker '" + *m + "' collides with an allowed word character");
      }
    }
    if (start_marker == end_marker) throw ConfigError("start and end markers must differ");
  }
};

// Which syllables receive start/end variants. Kept with trained models so
// unseen words are marked the same way as the training words were.
struct VariantMarking {
  double fraction = 0.0;
  std::string start_marker = "$";
  std::string end_marker = "#";
  std::set<std::string> start;
  std::set<std::string> end;

  bool empty() const { return start.empty() && end.empty(); }

  // Variant strings for a base decomposition.
  std::vector<std::string> apply(const std::vector<std::string>& base) const {
    std::vector<std::string> out = base;
    if (out.empty()) return out;
    if (start.count(base.front())) out.front() = start_marker + out.front();
    if (end.count(base.back())) out.back() = out.back() + end_marker;
    return out;
  }

  // Inverse of apply for a single variant token.
  std::string strip(const std::string& variant) const {
    std::string s = variant;
    if (s.size() > start_marker.size() && s.compare(0, start_marker.size(), start_marker) == 0) {
      s.erase(0, start_marker.size());
    }
    if (s.size() > end_marker.size() &&
        s.compare(s.size() - end_marker.size(), end_marker.size(), end_marker) == 0) {
      s.erase(s.size() - end_marker.size());
    }
    return s;
  }

  nlohmann::json to_json() const {
    return {{"fraction", fraction},
            {"start_marker", start_marker},
            {"end_marker", end_marker},
            {"start", std::vector<std::string>(start.begin(), start.end())},
            {"end", std::vector<std::string>(end.begin(), end.end())}};
  }

  static VariantMarking from_json(const nlohmann::json& j) {
    VariantMarking m;
    m.fraction = j.at("fraction").get<double>();
    m.start_marker = j.at("start_marker").get<std::string>();
    m.end_marker = j.at("end_marker").get<std::string>();
    for (const auto& s : j.at("start")) m.start.insert(s.get<std::string>());
    for (const auto& s : j.at("end")) m.end.insert(s.get<std::string>());
    return m;
  }
};

// Top ceil(fraction * n) syllables by start (resp. end) count, ranked
// separately.
inline VariantMarking select_variants(const DecompositionDataset& ds, const VariantConfig& cfg) {
  cfg.validate();
  VariantMarking m;
  m.fraction = cfg.fraction;
  m.start_marker = cfg.start_marker;
  m.end_marker = cfg.end_marker;
  const auto starts = rank_by_count(ds.start_counts());
  const auto ends = rank_by_count(ds.end_counts());
  const auto ks = top_count(cfg.fraction, starts.size());
  const auto ke = top_count(cfg.fraction, ends.size());
  m.start.insert(starts.begin(), starts.begin() + static_cast<std::ptrdiff_t>(ks));
  m.end.insert(ends.begin(), ends.begin() + static_cast<std::ptrdiff_t>(ke));
  return m;
}

struct TrainingExample {
  std::string word;
  std::vector<std::string> base;       // plain syllables
  std::vector<std::string> syllables;  // variant-annotated
  std::vector<int> ids;
  std::vector<double> target;
};

struct TrainingSet {
  std::size_t dim = 0;
  std::vector<TrainingExample> examples;
  SyllableVocab vocab;
  VariantMarking marking;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }

  // Rebuilds the vocabulary from the syllables actually used and refreshes
  // every example's ids.
  void reindex() {
    std::set<std::string> used;
    for (const auto& ex : examples) used.insert(ex.syllables.begin(), ex.syllables.end());
    vocab = SyllableVocab::from_set(used);
    for (auto& ex : examples) {
      ex.ids.clear();
      for (const auto& s : ex.syllables) ex.ids.push_back(*vocab.id(s));
    }
  }

  // Token-level occurrence counts of each variant string across examples.
  SyllableCounts variant_counts() const {
    SyllableCounts counts;
    for (const auto& ex : examples) {
      for (const auto& s : ex.syllables) ++counts[s];
    }
    return counts;
  }
};

// Words present in both the decomposition dataset and the embedding table.
inline TrainingSet build_training_set(const DecompositionDataset& ds, const EmbeddingTable& emb) {
  TrainingSet ts;
  ts.dim = emb.dim();
  for (const auto& [word, d] : ds.items()) {
    const auto vec = emb.find(word);
    if (!vec) continue;
    TrainingExample ex;
    ex.word = word;
    ex.base = d.syllables;
    ex.syllables = d.syllables;
    ex.target.assign(vec->begin(), vec->end());
    ts.examples.push_back(std::move(ex));
  }
  if (ts.examples.empty()) {
    throw std::runtime_error("decomposition dataset and embedding table share no words");
  }
  ts.reindex();
  return ts;
}

// Replaces first/last syllables by their '$'/'#' variants for the top
// fraction of start/end syllables. Only variants that occur end up in the
// vocabulary.
inline TrainingSet apply_start_end_variants(const TrainingSet& ts, const DecompositionDataset& ds,
                                            const VariantConfig& cfg) {
  TrainingSet out = ts;
  out.marking = select_variants(ds, cfg);
  for (auto& ex : out.examples) ex.syllables = out.marking.apply(ex.base);
  out.reindex();
  return out;
}

}  // namespace sylemb
