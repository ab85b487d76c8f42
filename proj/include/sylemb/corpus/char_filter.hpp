// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string>
#include <string_view>

#include "sylemb/utf8.hpp"

namespace sylemb {

// Set of characters a word (or syllable) may consist of.
class CharFilter {
 public:
  CharFilter() = default;
  explicit CharFilter(std::set<char32_t> allowed) : allowed_(std::move(allowed)) {}

  // Lowercase letters, digits and the accented vowels and consonants found in
  // Dutch and English loanwords. The hyphen is not included: it is the
  // syllable delimiter and words containing it are rejected.
  static CharFilter standard() {
    std::set<char32_t> s;
    for (char32_t c = U'a'; c <= U'z'; ++c) s.insert(c);
    for (char32_t c = U'0'; c <= U'9'; ++c) s.insert(c);
    for (char32_t c : std::u32string_view(U"äàáçëèéêïíîñöóüú")) s.insert(c);
    return CharFilter(std::move(s));
  }

  static CharFilter standard_with_hyphen() {
    auto f = standard();
    f.allowed_.insert(U'-');
    return f;
  }

  bool allows(char32_t c) const { return allowed_.count(c) != 0; }
  const std::set<char32_t>& allowed() const { return allowed_; }

 private:
  std::set<char32_t> allowed_;
};

// True iff every character of the lowercased word is allowed.
inline bool is_valid_word(std::string_view word, const CharFilter& filter) {
  if (word.empty()) return false;
  const auto cps = utf8::decode(word);
  if (!cps) return false;
  for (char32_t c : *cps) {
    if (!filter.allows(utf8::to_lower(c))) return false;
  }
  return true;
}

// Same test without lowercasing: uppercase marks names and abbreviations.
inline bool is_valid_syllable(std::string_view syllable, const CharFilter& filter) {
  if (syllable.empty()) return false;
  const auto cps = utf8::decode(syllable);
  if (!cps) return false;
  for (char32_t c : *cps) {
    if (!filter.allows(c)) return false;
  }
  return true;
}

}  // namespace sylemb
