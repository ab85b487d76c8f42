// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sylemb/corpus/embedding_table.hpp"
#include "sylemb/errors.hpp"
#include "sylemb/evaluation/correlation.hpp"

namespace sylemb {

struct AnnotatedPair {
  std::string id;
  std::string word1;
  std::string word2;
  std::vector<int> scores;  // one per annotator, 0..4
};

struct AnnotationSet {
  std::vector<AnnotatedPair> items;

  std::size_t annotators() const { return items.empty() ? 0 : items.front().scores.size(); }

  // Scores of annotator `a` across all items.
  std::vector<double> column(std::size_t a) const {
    std::vector<double> out;
    out.reserve(items.size());
    for (const auto& it : items) out.push_back(it.scores.at(a));
    return out;
  }
};

inline constexpr int kMinScore = 0;
inline constexpr int kMaxScore = 4;

// `pair_id<TAB>word1<TAB>word2<TAB>s1<TAB>s2...`; a first line with a
// non-integer score field is a header.
inline AnnotationSet load_annotations(std::istream& in, const std::string& source = "<stream>") {
  AnnotationSet set;
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
    if (f.size() < 5) throw ParseError(source, lineno, "expected an id, two words and at least two scores");
    AnnotatedPair item{f[0], f[1], f[2], {}};
    bool header = false;
    for (std::size_t k = 3; k < f.size(); ++k) {
      const auto v = detail::parse_int(f[k]);
      if (!v) {
        if (lineno == 1 && set.items.empty()) {
          header = true;
          break;
        }
        throw ParseError(source, lineno, "score '" + f[k] + "' is not an integer");
      }
      if (*v < kMinScore || *v > kMaxScore) {
        throw ParseError(source, lineno, "score " + std::to_string(*v) + " outside 0..4");
      }
      item.scores.push_back(static_cast<int>(*v));
    }
    if (header) continue;
    if (!set.items.empty() && item.scores.size() != set.annotators()) {
      throw ParseError(source, lineno, "annotator count differs from earlier rows");
    }
    set.items.push_back(std::move(item));
  }
  return set;
}

inline AnnotationSet load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open annotation file: " + path);
  return load_annotations(in, path);
}

struct AgreementReport {
  std::size_t annotators = 0;
  std::vector<std::vector<std::optional<double>>> matrix;  // symmetric, diagonal 1
  std::optional<double> average;                          // mean over defined i<j pairs
  std::vector<std::pair<std::size_t, std::size_t>> undefined;

  nlohmann::json to_json() const {
    nlohmann::json m = nlohmann::json::array();
    for (const auto& row : matrix) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& v : row) r.push_back(v ? nlohmann::json(*v) : nlohmann::json());
      m.push_back(r);
    }
    nlohmann::json u = nlohmann::json::array();
    for (const auto& [i, j] : undefined) u.push_back({i + 1, j + 1});
    return {{"annotators", annotators},
            {"pearson", m},
            {"average", average ? nlohmann::json(*average) : nlohmann::json()},
            {"undefined_pairs", u}};
  }
};

// Pairwise Pearson between annotators. Pairs involving a constant annotator
// are left undefined and excluded from the average.
inline AgreementReport annotator_agreement(const AnnotationSet& a) {
  const std::size_t n = a.annotators();
  if (n < 2) throw std::invalid_argument("agreement needs at least two annotators");
  AgreementReport rep;
  rep.annotators = n;
  rep.matrix.assign(n, std::vector<std::optional<double>>(n));
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    rep.matrix[i][i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      try {
        const double r = pearson(a.column(i), a.column(j));
        rep.matrix[i][j] = rep.matrix[j][i] = r;
        sum += r;
        ++count;
      } catch (const UndefinedCorrelationError&) {
        rep.undefined.emplace_back(i, j);
      }
    }
  }
  if (count) rep.average = sum / static_cast<double>(count);
  return rep;
}

// For each annotator, ids of items where the score differs from the mean of
// the other annotators by strictly more than `threshold`.
inline std::vector<std::vector<std::string>> flag_deviations(const AnnotationSet& a, double threshold = 1.0) {
  const std::size_t n = a.annotators();
  if (n < 3) throw std::invalid_argument("deviation flags need at least three annotators");
  std::vector<std::vector<std::string>> flags(n);
  for (const auto& it : a.items) {
    int total = 0;
    for (int s : it.scores) total += s;
    for (std::size_t i = 0; i < n; ++i) {
      const double others = static_cast<double>(total - it.scores[i]) / static_cast<double>(n - 1);
      if (std::abs(static_cast<double>(it.scores[i]) - others) > threshold) flags[i].push_back(it.id);
    }
  }
  return flags;
}

// Mean of all annotator scores per item.
inline std::map<std::string, double> aggregate_final_scores(const AnnotationSet& a) {
  std::map<std::string, double> out;
  for (const auto& it : a.items) {
    double s = 0.0;
    for (int v : it.scores) s += v;
    out[it.id] = it.scores.empty() ? 0.0 : s / static_cast<double>(it.scores.size());
  }
  return out;
}

}  // namespace sylemb
