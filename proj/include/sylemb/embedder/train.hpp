// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <vector>

#include "sylemb/corpus/training_set.hpp"
#include "sylemb/embedder/gradients.hpp"
#include "sylemb/embedder/model.hpp"
#include "sylemb/nn/adam.hpp"
#include "sylemb/nn/schedule.hpp"
#include "sylemb/random.hpp"

namespace sylemb {

struct EmbedderTrainingResult {
  EmbedderModel model;
  std::vector<double> loss_history;  // mean per-example loss of each epoch
  bool early_stopped = false;
};

namespace detail {

inline void ensure_state(nn::Parameter& p) {
  if (p.adam.size() != p.value.size()) p.adam = nn::AdamState(p.value.size());
}

inline void dense_step(nn::Parameter& p, const nn::Tensor& grad, const nn::AdamConfig& cfg, double lr) {
  ensure_state(p);
  nn::adam_amsgrad_step(p.value.span(), grad.span(), p.adam, cfg, lr);
}

}  // namespace detail

// Per-example AMSGrad on mse(compose(ids), target). Each epoch shuffles the
// examples with the seeded generator and uses lr_at_epoch(e).
inline EmbedderTrainingResult train_embedder(
    const TrainingSet& ts, const EmbedderConfig& cfg,
    const std::function<void(int, double)>& on_epoch = {}) {
  cfg.validate();
  if (ts.empty()) throw std::invalid_argument("training set is empty");
  if (ts.dim != cfg.out_dim) {
    throw ShapeError("training targets have dimension " + std::to_string(ts.dim) +
                     " but the model outputs " + std::to_string(cfg.out_dim));
  }
  Rng rng(cfg.seed);
  EmbedderTrainingResult res;
  auto& model = res.model;
  model = EmbedderModel(cfg.kind, cfg.dim, cfg.out_dim, ts.vocab, ts.marking);
  model.initialize(rng, cfg.init_scale);
  detail::ensure_state(model.table);

  std::vector<std::size_t> order(ts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  EmbedderGradients g;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    const double lr = nn::lr_at_epoch(epoch, cfg.adam.lr0);
    double total = 0.0;
    for (std::size_t step = 0; step < order.size(); ++step) {
      const auto& ex = ts.examples[order[step]];
      const double loss = loss_and_gradient(model, ex.ids, ex.target, g);
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "non-finite loss at epoch " << epoch << ", step " << step << " (word '" << ex.word
            << "', lr " << lr << ")";
        throw TrainingDivergedError(msg.str());
      }
      total += loss;
      nn::adam_amsgrad_step_rows(model.table.value.span(), model.dim, g.rows, g.row_grads,
                                 model.table.adam, cfg.adam, lr);
      if (model.has_attention()) {
        detail::dense_step(model.w_q, g.w_q, cfg.adam, lr);
        detail::dense_step(model.w_k, g.w_k, cfg.adam, lr);
        detail::dense_step(model.b_k, g.b_k, cfg.adam, lr);
      }
      if (model.kind == ComposerKind::attention2) {
        detail::dense_step(model.w_e, g.w_e, cfg.adam, lr);
        detail::dense_step(model.b_e, g.b_e, cfg.adam, lr);
      }
    }
    const double mean = total / static_cast<double>(ts.size());
    res.loss_history.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
    if (cfg.early_stop_tol > 0.0 && epoch > 0) {
      const double prev = res.loss_history[res.loss_history.size() - 2];
      if (prev - mean < cfg.early_stop_tol) {
        res.early_stopped = true;
        break;
      }
    }
  }
  for (auto* p : model.parameters()) p->adam = nn::AdamState();
  return res;
}

}  // namespace sylemb
