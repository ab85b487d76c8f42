// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "sylemb/corpus/decomposition.hpp"
#include "sylemb/nn/schedule.hpp"
#include "sylemb/splitter/model.hpp"

namespace sylemb {

struct SplitterEpoch {
  int epoch = 0;
  double train_loss = 0.0;  // mean summed cross entropy per word
  std::optional<double> eval_loss;
  double lr = 0.0;
};

struct SplitterTrainingResult {
  SplitterModel model;  // weights of the best epoch
  std::vector<SplitterEpoch> history;
  int best_epoch = 0;
  bool early_stopped = false;
};

// Summed teacher-forced cross entropy of one example. With `train`, dropout
// is active and gradients accumulate into the model parameters.
inline double splitter_example_loss(SplitterModel& model, const EncodedExample& ex, bool train = false,
                                    Rng* rng = nullptr) {
  nn::Tape tape(train);
  SplitterGraph graph(model, tape, train ? model.config.dropout : 0.0, rng);
  const auto loss = graph.loss(ex.source, ex.target);
  if (train) tape.backward(loss);
  return tape.scalar(loss);
}

inline double splitter_mean_loss(SplitterModel& model, const std::vector<EncodedExample>& examples) {
  double total = 0.0;
  for (const auto& ex : examples) total += splitter_example_loss(model, ex);
  return total / static_cast<double>(examples.size());
}

// Encodes a dataset, dropping words with characters outside the vocabulary.
inline std::vector<EncodedExample> encode_dataset(const DecompositionDataset& ds, const CharVocab& v) {
  std::vector<EncodedExample> out;
  out.reserve(ds.size());
  for (const auto& [word, d] : ds.items()) {
    try {
      out.push_back(encode_example(d, v));
    } catch (const UnknownCharacterError&) {
    }
  }
  return out;
}

// One example per AMSGrad step, lr_at_epoch schedule, dropout during
// training. Early stopping watches the eval loss (training loss when no eval
// set is given) and restores the best epoch's weights.
inline SplitterTrainingResult train_splitter(const DecompositionDataset& ds, const SplitterConfig& cfg,
                                             const DecompositionDataset* eval = nullptr,
                                             const std::function<void(const SplitterEpoch&)>& on_epoch = {}) {
  cfg.validate();
  if (ds.empty()) throw std::invalid_argument("splitter training set is empty");
  Rng rng(cfg.seed);
  SplitterTrainingResult res;
  SplitterModel model(cfg, CharVocab::from_dataset(ds));
  model.initialize(rng);
  const auto train_set = encode_dataset(ds, model.vocab);
  std::vector<EncodedExample> eval_set;
  if (eval && !eval->empty()) eval_set = encode_dataset(*eval, model.vocab);

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto params = model.parameters();
  double best = std::numeric_limits<double>::infinity();
  res.model = model;
  int stale = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    SplitterEpoch rec;
    rec.epoch = epoch;
    rec.lr = nn::lr_at_epoch(epoch, cfg.adam.lr0);
    double total = 0.0;
    for (std::size_t step = 0; step < order.size(); ++step) {
      model.zero_grad();
      const auto& ex = train_set[order[step]];
      const double loss = splitter_example_loss(model, ex, true, &rng);
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "non-finite splitter loss at epoch " << epoch << ", step " << step << " (lr " << rec.lr << ")";
        throw TrainingDivergedError(msg.str());
      }
      total += loss;
      for (auto* p : params) p->step(cfg.adam, rec.lr);
    }
    rec.train_loss = total / static_cast<double>(train_set.size());
    if (!eval_set.empty()) rec.eval_loss = splitter_mean_loss(model, eval_set);
    res.history.push_back(rec);
    if (on_epoch) on_epoch(rec);

    const double watched = rec.eval_loss.value_or(rec.train_loss);
    if (watched < best) {
      best = watched;
      res.best_epoch = epoch;
      res.model = model;
      stale = 0;
    } else if (cfg.patience > 0 && ++stale >= cfg.patience) {
      res.early_stopped = true;
      break;
    }
  }
  for (auto* p : res.model.parameters()) {
    p->adam = nn::AdamState();
    p->zero_grad();
  }
  return res;
}

}  // namespace sylemb
