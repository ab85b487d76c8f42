// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "sylemb/corpus/decomposition.hpp"
#include "sylemb/corpus/ranking.hpp"

namespace sylemb {

// Number of unique syllables per occurrence-count bin. Bin i covers counts
// [i*width + 1, (i+1)*width]; counts above `cap` go to `overflow`.
struct Histogram {
  std::int64_t bin_width = 20;
  std::int64_t cap = 1000;
  std::vector<std::int64_t> bins;
  std::int64_t overflow = 0;

  std::int64_t total() const {
    std::int64_t n = overflow;
    for (auto b : bins) n += b;
    return n;
  }

  nlohmann::json to_json() const {
    return {{"bin_width", bin_width}, {"cap", cap}, {"bins", bins}, {"overflow", overflow}};
  }
};

inline Histogram syllable_histogram(const DecompositionDataset& ds, std::int64_t bin_width = 20,
                                    std::int64_t cap = 1000) {
  if (bin_width < 1) throw std::invalid_argument("bin width must be at least 1");
  if (cap < 1) throw std::invalid_argument("histogram cap must be at least 1");
  Histogram h;
  h.bin_width = bin_width;
  h.cap = cap;
  h.bins.assign(static_cast<std::size_t>((cap + bin_width - 1) / bin_width), 0);
  for (const auto& [s, count] : ds.syllable_counts()) {
    if (count > cap) {
      ++h.overflow;
    } else if (count >= 1) {
      ++h.bins[static_cast<std::size_t>((count - 1) / bin_width)];
    }
  }
  return h;
}

namespace detail {

// For each word, the worst (largest) frequency rank among its syllables.
// The word is formable from the top k syllables iff that rank is < k.
inline std::vector<std::size_t> worst_syllable_ranks(const DecompositionDataset& ds) {
  const auto ranked = rank_by_count(ds.syllable_counts());
  std::unordered_map<std::string, std::size_t> rank;
  rank.reserve(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) rank.emplace(ranked[i], i);
  std::vector<std::size_t> worst;
  worst.reserve(ds.size());
  for (const auto& [w, d] : ds.items()) {
    std::size_t r = 0;
    for (const auto& s : d.syllables) r = std::max(r, rank.at(s));
    worst.push_back(r);
  }
  std::sort(worst.begin(), worst.end());
  return worst;
}

inline double covered_share(const std::vector<std::size_t>& sorted_worst, std::size_t k) {
  if (sorted_worst.empty()) return 0.0;
  const auto n = std::lower_bound(sorted_worst.begin(), sorted_worst.end(), k) - sorted_worst.begin();
  return static_cast<double>(n) / static_cast<double>(sorted_worst.size());
}

}  // namespace detail

// Share of words whose syllables all rank within the top ceil(fraction * n)
// syllables by count.
inline double coverage_at_top_fraction(const DecompositionDataset& ds, double fraction) {
  const auto k = top_count(fraction, ds.syllable_counts().size());
  return detail::covered_share(detail::worst_syllable_ranks(ds), k);
}

struct CoveragePoint {
  double fraction;
  double coverage;
};

// Coverage at fractions 0, 1/steps, ..., 1.
inline std::vector<CoveragePoint> coverage_curve(const DecompositionDataset& ds, int steps = 100) {
  if (steps < 1) throw std::invalid_argument("coverage steps must be at least 1");
  const auto worst = detail::worst_syllable_ranks(ds);
  const auto n = ds.syllable_counts().size();
  std::vector<CoveragePoint> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    const double f = static_cast<double>(i) / steps;
    out.push_back({f, detail::covered_share(worst, top_count(f, n))});
  }
  return out;
}

}  // namespace sylemb
