// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sylemb/corpus/decomposition.hpp"
#include "sylemb/errors.hpp"
#include "sylemb/utf8.hpp"

namespace sylemb {

// Token ids: 0 PAD, 1 BOS, 2 EOS, 3 '-', then the training characters in
// code-point order.
class CharVocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kDelim = 3;
  static constexpr int kFirstChar = 4;

  CharVocab() = default;

  explicit CharVocab(std::vector<char32_t> chars) : chars_(std::move(chars)) {
    std::sort(chars_.begin(), chars_.end());
    chars_.erase(std::unique(chars_.begin(), chars_.end()), chars_.end());
    if (std::binary_search(chars_.begin(), chars_.end(), U'-')) {
      throw std::invalid_argument("'-' is reserved for the syllable delimiter");
    }
    for (std::size_t i = 0; i < chars_.size(); ++i) index_[chars_[i]] = kFirstChar + static_cast<int>(i);
  }

  static CharVocab from_dataset(const DecompositionDataset& ds) {
    std::set<char32_t> seen;
    for (const auto& [word, d] : ds.items()) {
      const auto cps = utf8::decode(word);
      if (!cps) throw std::invalid_argument("invalid UTF-8 in word");
      seen.insert(cps->begin(), cps->end());
    }
    return CharVocab(std::vector<char32_t>(seen.begin(), seen.end()));
  }

  std::size_t size() const { return kFirstChar + chars_.size(); }
  const std::vector<char32_t>& chars() const { return chars_; }

  std::optional<int> id(char32_t cp) const {
    auto it = index_.find(cp);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Text for a token id; specials render as B, E, P.
  std::string token_text(int id) const {
    switch (id) {
      case kPad: return "P";
      case kBos: return "B";
      case kEos: return "E";
      case kDelim: return "-";
      default: return utf8::encode(chars_.at(static_cast<std::size_t>(id - kFirstChar)));
    }
  }

  // Character ids of `text`, without BOS/EOS.
  std::vector<int> encode_chars(const std::string& text) const {
    const auto cps = utf8::decode(text);
    if (!cps) throw UnknownCharacterError("invalid UTF-8 in '" + text + "'");
    std::vector<int> out;
    out.reserve(cps->size());
    for (char32_t cp : *cps) {
      const auto i = id(cp);
      if (!i) {
        throw UnknownCharacterError("character " + utf8::describe(cp) + " in '" + text +
                                    "' is not in the splitter vocabulary");
      }
      out.push_back(*i);
    }
    return out;
  }

  std::vector<int> encode_word(const std::string& word) const {
    std::vector<int> out{kBos};
    for (int i : encode_chars(word)) out.push_back(i);
    out.push_back(kEos);
    return out;
  }

  nlohmann::json to_json() const {
    std::vector<std::string> v;
    for (char32_t c : chars_) v.push_back(utf8::encode(c));
    return v;
  }

  static CharVocab from_json(const nlohmann::json& j) {
    std::vector<char32_t> chars;
    for (const auto& s : j) {
      const auto cps = utf8::decode(s.get<std::string>());
      if (!cps || cps->size() != 1) throw std::runtime_error("malformed character vocabulary");
      chars.push_back((*cps)[0]);
    }
    return CharVocab(std::move(chars));
  }

 private:
  std::vector<char32_t> chars_;
  std::unordered_map<char32_t, int> index_;
};

struct EncodedExample {
  std::vector<int> source;  // BOS word EOS
  std::vector<int> target;  // BOS syl1 '-' syl2 ... EOS
};

inline EncodedExample encode_example(const Decomposition& d, const CharVocab& v) {
  EncodedExample ex;
  ex.source = v.encode_word(d.word);
  ex.target.push_back(CharVocab::kBos);
  for (std::size_t i = 0; i < d.syllables.size(); ++i) {
    if (i) ex.target.push_back(CharVocab::kDelim);
    for (int c : v.encode_chars(d.syllables[i])) ex.target.push_back(c);
  }
  ex.target.push_back(CharVocab::kEos);
  return ex;
}

}  // namespace sylemb
