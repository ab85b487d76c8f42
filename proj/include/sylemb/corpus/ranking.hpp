// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sylemb/corpus/decomposition.hpp"

namespace sylemb {

// Keys with a positive count, by descending count then lexicographically.
inline std::vector<std::string> rank_by_count(const SyllableCounts& counts) {
  std::vector<std::pair<std::string, std::int64_t>> items;
  items.reserve(counts.size());
  for (const auto& [k, c] : counts) {
    if (c > 0) items.emplace_back(k, c);
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto& [k, c] : items) out.push_back(std::move(k));
  return out;
}

// ceil(fraction * n), with a small tolerance so that e.g. 0.1 * 30 yields 3.
inline std::size_t top_count(double fraction, std::size_t n) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("fraction must lie in [0, 1]");
  }
  const double k = std::ceil(fraction * static_cast<double>(n) - 1e-9);
  return std::min(n, static_cast<std::size_t>(std::max(0.0, k)));
}

}  // namespace sylemb
