// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sylemb/nn/adam.hpp"
#include "sylemb/nn/tensor.hpp"
#include "sylemb/random.hpp"

namespace sylemb::nn {

// Trainable tensor with its gradient accumulator and optimizer moments.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  AdamState adam;

  Parameter() = default;
  Parameter(std::string n, std::vector<std::size_t> shape)
      : name(std::move(n)), value(shape), grad(shape) {}

  std::size_t size() const { return value.size(); }
  void zero_grad() { grad.fill(0.0); }

  // Optimizer moments are allocated on the first step.
  void step(const AdamConfig& cfg, double lr) {
    if (adam.size() != value.size()) adam = AdamState(value.size());
    adam_amsgrad_step(value.span(), grad.span(), adam, cfg, lr);
  }

  void init_uniform(Rng& rng, double bound) {
    for (auto& x : value.data()) x = rng.uniform(-bound, bound);
  }

  void reset_optimizer() { adam = AdamState(value.size()); }
};

}  // namespace sylemb::nn
