// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sylemb/corpus/char_filter.hpp"
#include "sylemb/errors.hpp"

namespace sylemb {

struct Decomposition {
  std::string word;
  std::vector<std::string> syllables;

  std::string joined(char delimiter = '-') const {
    std::string out;
    for (std::size_t i = 0; i < syllables.size(); ++i) {
      if (i) out.push_back(delimiter);
      out += syllables[i];
    }
    return out;
  }

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

inline std::string concat(const std::vector<std::string>& syllables) {
  std::string out;
  for (const auto& s : syllables) out += s;
  return out;
}

inline bool is_valid_decomposition(const Decomposition& d, const CharFilter& filter) {
  if (d.syllables.empty()) return false;
  for (const auto& s : d.syllables) {
    if (!is_valid_syllable(s, filter)) return false;
  }
  return true;
}

using SyllableCounts = std::map<std::string, std::int64_t>;

// Word -> decomposition map with token-level syllable statistics. A syllable
// occurring twice in one word is counted twice; a one-syllable word counts
// toward both the start and the end tallies.
class DecompositionDataset {
 public:
  DecompositionDataset() = default;

  explicit DecompositionDataset(const std::vector<Decomposition>& items) {
    for (const auto& d : items) items_[d.word] = d;
    recount();
  }

  // Inserts or replaces. Returns true when an existing entry was replaced.
  bool insert(Decomposition d) {
    if (d.syllables.empty()) throw std::invalid_argument("decomposition without syllables: " + d.word);
    auto [it, inserted] = items_.insert_or_assign(d.word, std::move(d));
    recount();
    return !inserted;
  }

  const std::map<std::string, Decomposition>& items() const { return items_; }
  const SyllableCounts& syllable_counts() const { return syllable_counts_; }
  const SyllableCounts& start_counts() const { return start_counts_; }
  const SyllableCounts& end_counts() const { return end_counts_; }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  const Decomposition* find(const std::string& word) const {
    auto it = items_.find(word);
    return it == items_.end() ? nullptr : &it->second;
  }

  std::int64_t total_syllable_slots() const {
    std::int64_t n = 0;
    for (const auto& [w, d] : items_) n += static_cast<std::int64_t>(d.syllables.size());
    return n;
  }

  void recount() {
    syllable_counts_.clear();
    start_counts_.clear();
    end_counts_.clear();
    for (const auto& [w, d] : items_) {
      for (const auto& s : d.syllables) ++syllable_counts_[s];
      ++start_counts_[d.syllables.front()];
      ++end_counts_[d.syllables.back()];
    }
  }

 private:
  friend class DecompositionLoader;

  std::map<std::string, Decomposition> items_;
  SyllableCounts syllable_counts_;
  SyllableCounts start_counts_;
  SyllableCounts end_counts_;
};

struct DecompositionLoadReport {
  std::size_t lines = 0;
  std::size_t accepted = 0;
  std::size_t blank = 0;
  std::size_t filtered = 0;            // failed the character filter
  std::size_t rejoin_mismatch = 0;     // syllables do not concatenate to the word
  std::size_t duplicates = 0;          // earlier entry replaced
  std::vector<std::string> warnings;   // capped at kMaxWarnings

  static constexpr std::size_t kMaxWarnings = 50;

  void warn(std::string msg) {
    if (warnings.size() < kMaxWarnings) warnings.push_back(std::move(msg));
  }

  nlohmann::json to_json() const {
    return {{"lines", lines},       {"accepted", accepted},
            {"blank", blank},       {"filtered", filtered},
            {"rejoin_mismatch", rejoin_mismatch},
            {"duplicates", duplicates}, {"warnings", warnings}};
  }
};

class DecompositionLoader {
 public:
  // Reads `word<TAB>syl1-syl2-...` records. Lines with a missing TAB or an
  // empty syllable raise ParseError; filtered or non-rejoining lines are
  // skipped and tallied in the report.
  static DecompositionDataset load(std::istream& in, const CharFilter& filter,
                                   const std::string& source = "<stream>",
                                   DecompositionLoadReport* report = nullptr) {
    DecompositionLoadReport local;
    auto& rep = report ? *report : local;
    DecompositionDataset ds;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      ++rep.lines;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) {
        ++rep.blank;
        continue;
      }
      const auto tab = line.find('\t');
      if (tab == std::string::npos) throw ParseError(source, lineno, "missing TAB separator");
      if (line.find('\t', tab + 1) != std::string::npos) {
        throw ParseError(source, lineno, "more than two TAB-separated fields");
      }
      Decomposition d;
      d.word = line.substr(0, tab);
      if (d.word.empty()) throw ParseError(source, lineno, "empty word");
      std::string_view rest(line);
      rest.remove_prefix(tab + 1);
      if (rest.empty()) throw ParseError(source, lineno, "empty decomposition");
      std::size_t start = 0;
      while (true) {
        const auto dash = rest.find('-', start);
        const auto piece = rest.substr(start, dash == std::string_view::npos ? std::string_view::npos : dash - start);
        if (piece.empty()) throw ParseError(source, lineno, "empty syllable");
        d.syllables.emplace_back(piece);
        if (dash == std::string_view::npos) break;
        start = dash + 1;
      }
      if (!is_valid_decomposition(d, filter)) {
        ++rep.filtered;
        continue;
      }
      if (concat(d.syllables) != d.word) {
        ++rep.rejoin_mismatch;
        rep.warn(source + ":" + std::to_string(lineno) + ": syllables '" + d.joined() +
                 "' do not rejoin to '" + d.word + "'");
        continue;
      }
      if (ds.items_.count(d.word)) {
        ++rep.duplicates;
        rep.warn(source + ":" + std::to_string(lineno) + ": duplicate word '" + d.word +
                 "', later line wins");
      } else {
        ++rep.accepted;
      }
      const std::string key = d.word;
      ds.items_[key] = std::move(d);
    }
    ds.recount();
    return ds;
  }
};

inline DecompositionDataset load_decompositions(std::istream& in, const CharFilter& filter,
                                                DecompositionLoadReport* report = nullptr) {
  return DecompositionLoader::load(in, filter, "<stream>", report);
}

inline DecompositionDataset load_decompositions(const std::string& path, const CharFilter& filter,
                                                DecompositionLoadReport* report = nullptr) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open decomposition file: " + path);
  return DecompositionLoader::load(in, filter, path, report);
}

}  // namespace sylemb
