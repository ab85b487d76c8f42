// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "sylemb/corpus/embedding_table.hpp"
#include "sylemb/embedder/embed.hpp"
#include "sylemb/evaluation/correlation.hpp"
#include "sylemb/nn/ops.hpp"

namespace sylemb {

struct WordPair {
  std::string word1;
  std::string word2;
  double gold = 0.0;
};

struct PairDataset {
  std::string name;
  std::vector<WordPair> pairs;

  // Lowercased words across both columns, phrases split into words.
  std::set<std::string> unique_words() const {
    std::set<std::string> out;
    for (const auto& p : pairs) {
      for (const auto* s : {&p.word1, &p.word2}) {
        for (auto& w : phrase_words(*s)) out.insert(std::move(w));
      }
    }
    return out;
  }
};

// `word1<TAB>word2<TAB>score` lines. A first line whose score is not numeric
// is taken as a header.
inline PairDataset load_pairs(std::istream& in, const std::string& name = "<stream>") {
  PairDataset ds;
  ds.name = name;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      f.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (f.size() != 3) throw ParseError(name, lineno, "expected 3 TAB-separated fields, got " + std::to_string(f.size()));
    const auto score = detail::parse_double(f[2]);
    if (!score) {
      if (ds.pairs.empty() && lineno == 1) continue;
      throw ParseError(name, lineno, "non-numeric score '" + f[2] + "'");
    }
    if (!std::isfinite(*score)) throw ParseError(name, lineno, "score is not finite");
    if (f[0].empty() || f[1].empty()) throw ParseError(name, lineno, "empty word");
    ds.pairs.push_back({f[0], f[1], *score});
  }
  return ds;
}

inline PairDataset load_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pair file: " + path);
  return load_pairs(in, path);
}

struct PairScore {
  std::string word1;
  std::string word2;
  double gold = 0.0;
  std::optional<double> similarity;
};

struct EvalReport {
  std::string dataset;
  double spearman = 0.0;
  std::size_t pairs_used = 0;
  std::size_t pairs_total = 0;
  std::size_t missing_words = 0;
  std::vector<std::string> missing_word_list;  // sorted
  std::vector<PairScore> pairs;
  std::map<std::string, std::size_t> reason_counts;  // per unique word

  nlohmann::json to_json(bool include_pairs = false) const {
    nlohmann::json j = {{"dataset", dataset},
                        {"spearman", spearman},
                        {"pairs_used", pairs_used},
                        {"pairs_total", pairs_total},
                        {"missing_words", missing_words},
                        {"missing_word_list", missing_word_list},
                        {"reason_counts", reason_counts}};
    if (include_pairs) {
      j["pairs"] = nlohmann::json::array();
      for (const auto& p : pairs) {
        j["pairs"].push_back({{"word1", p.word1},
                              {"word2", p.word2},
                              {"gold", p.gold},
                              {"similarity", p.similarity ? nlohmann::json(*p.similarity) : nlohmann::json()}});
      }
    }
    return j;
  }

  // word1, word2, gold, cosine (empty when skipped).
  void write_pair_tsv(std::ostream& out) const {
    out << "word1\tword2\tgold\tsimilarity\n";
    for (const auto& p : pairs) {
      out << p.word1 << '\t' << p.word2 << '\t' << p.gold << '\t';
      if (p.similarity) out << *p.similarity;
      out << '\n';
    }
  }
};

// Cosine similarity per pair, Spearman against gold over the pairs where
// both phrases embed.
inline EvalReport evaluate_pairs(const EmbedFn& embed_fn, const PairDataset& ds) {
  EvalReport rep;
  rep.dataset = ds.name;
  rep.pairs_total = ds.pairs.size();
  std::unordered_map<std::string, EmbedOutcome> cache;
  std::set<std::string> missing;
  std::map<std::string, std::string> word_reason;
  auto lookup = [&](const std::string& phrase) -> const EmbedOutcome& {
    auto it = cache.find(phrase);
    if (it == cache.end()) {
      it = cache.emplace(phrase, embed_fn(phrase)).first;
      for (const auto& w : it->second.missing_words) missing.insert(w);
      for (const auto& w : it->second.words) word_reason.emplace(w.word, std::string(to_string(w.reason)));
    }
    return it->second;
  };
  std::vector<double> gold, sims;
  for (const auto& p : ds.pairs) {
    PairScore s{p.word1, p.word2, p.gold, std::nullopt};
    const auto& a = lookup(p.word1);
    const auto& b = lookup(p.word2);
    if (a.ok() && b.ok()) {
      s.similarity = nn::cosine(*a.vector, *b.vector);
      gold.push_back(p.gold);
      sims.push_back(*s.similarity);
    }
    rep.pairs.push_back(std::move(s));
  }
  rep.pairs_used = gold.size();
  rep.missing_word_list.assign(missing.begin(), missing.end());
  rep.missing_words = missing.size();
  for (const auto& [w, r] : word_reason) ++rep.reason_counts[r];
  if (rep.pairs_used == 0) throw std::runtime_error("no pair of '" + ds.name + "' could be embedded");
  rep.spearman = spearman(gold, sims);
  return rep;
}

// Embedder that looks phrases up in a fixed table.
inline EmbedFn table_embed_fn(const EmbeddingTable& table) {
  return [&table](std::string_view phrase) { return embed_with_table(table, phrase); };
}

inline EmbedFn model_embed_fn(const EmbedderModel& model, Resolver resolver) {
  return [&model, resolver = std::move(resolver)](std::string_view phrase) { return embed(model, phrase, resolver); };
}

}  // namespace sylemb
