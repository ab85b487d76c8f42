// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "sylemb/splitter/decode.hpp"
#include "sylemb/splitter/serialize.hpp"
#include "sylemb/splitter/train.hpp"

namespace sylemb {

struct GridPoint {
  int layers = 1;
  int embedding = 16;
  int heads = 4;
  int hidden = 64;

  bool valid() const { return heads * 4 <= embedding && embedding % heads == 0; }
};

inline const std::vector<int> kGridLayers{1, 2};
inline const std::vector<int> kGridHidden{64, 128, 256};
inline const std::vector<int> kGridEmbedding{16, 32, 64};
inline const std::vector<int> kGridHeads{4, 8, 16};

// Every combination of the grid axes, invalid head counts included.
inline std::vector<GridPoint> full_grid() {
  std::vector<GridPoint> out;
  for (int l : kGridLayers)
    for (int h : kGridHidden)
      for (int e : kGridEmbedding)
        for (int k : kGridHeads) out.push_back({l, e, k, h});
  return out;
}

inline SplitterConfig grid_config(const GridPoint& p, SplitterConfig base) {
  base.layers = p.layers;
  base.embedding = p.embedding;
  base.heads = p.heads;
  base.hidden = p.hidden;
  return base;
}

inline std::size_t serialized_size(const SplitterModel& m) {
  std::ostringstream out;
  save_splitter(out, m);
  return out.str().size();
}

struct GridResult {
  GridPoint point;
  std::optional<double> accuracy;  // empty for invalid points
  std::size_t model_bytes = 0;
};

inline std::vector<GridResult> run_grid(const DecompositionDataset& train, const DecompositionDataset& eval,
                                        const SplitterConfig& base, const std::vector<GridPoint>& points,
                                        const std::function<void(const GridResult&)>& on_result = {}) {
  std::vector<GridResult> out;
  for (const auto& p : points) {
    GridResult r{p, std::nullopt, 0};
    if (p.valid()) {
      const auto trained = train_splitter(train, grid_config(p, base), &eval);
      r.accuracy = splitter_accuracy(trained.model, eval);
      r.model_bytes = serialized_size(trained.model);
    }
    if (on_result) on_result(r);
    out.push_back(r);
  }
  return out;
}

// Wide table: one row per (layers, hidden), one column per (embedding,
// heads); accuracies in percent, "--" where no result exists.
inline void write_grid_tsv(std::ostream& out, const std::vector<GridResult>& results) {
  auto find = [&](int l, int h, int e, int k) -> const GridResult* {
    for (const auto& r : results) {
      if (r.point.layers == l && r.point.hidden == h && r.point.embedding == e && r.point.heads == k) return &r;
    }
    return nullptr;
  };
  out << "layers\thidden";
  for (int e : kGridEmbedding)
    for (int k : kGridHeads) out << "\temb" << e << "_heads" << k;
  out << '\n';
  for (int l : kGridLayers) {
    for (int h : kGridHidden) {
      out << l << '\t' << h;
      for (int e : kGridEmbedding) {
        for (int k : kGridHeads) {
          const auto* r = find(l, h, e, k);
          if (r && r->accuracy) {
            out << '\t' << std::fixed << std::setprecision(1) << 100.0 * *r->accuracy;
          } else {
            out << "\t--";
          }
        }
      }
      out << '\n';
    }
  }
}

}  // namespace sylemb
