// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "sylemb/errors.hpp"

namespace sylemb::nn {

struct AdamConfig {
  double beta1 = 0.90;
  double beta2 = 0.999;
  double epsilon = 1e-10;
  bool amsgrad = true;
  double lr0 = 0.05;

  void validate() const {
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must lie in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must lie in [0, 1)");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(lr0 > 0.0)) throw ConfigError("learning rate must be positive");
  }
};

// Per-parameter moments. v_hat is the running max of v (AMSGrad).
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::vector<double> v_hat;
  std::int64_t t = 0;

  AdamState() = default;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0), v_hat(n, 0.0) {}

  std::size_t size() const { return m.size(); }
};

namespace detail {

struct BiasCorrection {
  double c1;
  double c2;
};

inline BiasCorrection bias_correction(const AdamConfig& cfg, std::int64_t t) {
  return {1.0 - std::pow(cfg.beta1, static_cast<double>(t)),
          1.0 - std::pow(cfg.beta2, static_cast<double>(t))};
}

inline void update_coordinate(double& theta, double g, double& m, double& v, double& v_hat,
                              const AdamConfig& cfg, BiasCorrection bc, double lr) {
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
  v_hat = std::max(v_hat, v);
  const double second = cfg.amsgrad ? v_hat : v;
  theta -= lr * (m / bc.c1) / (std::sqrt(second / bc.c2) + cfg.epsilon);
}

}  // namespace detail

// One bias-corrected AMSGrad step over every coordinate.
inline void adam_amsgrad_step(std::span<double> params, std::span<const double> grads,
                              AdamState& state, const AdamConfig& cfg, double lr) {
  if (params.size() != grads.size() || params.size() != state.size()) {
    throw ShapeError("adam step: parameter, gradient and state sizes differ");
  }
  ++state.t;
  const auto bc = detail::bias_correction(cfg, state.t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    detail::update_coordinate(params[i], grads[i], state.m[i], state.v[i], state.v_hat[i], cfg, bc,
                              lr);
  }
}

// Row-sparse variant for embedding tables: only the listed rows (each of
// width `width`) are touched; the step counter still advances once.
// row_grads holds one gradient row per entry of `rows`, in the same order.
inline void adam_amsgrad_step_rows(std::span<double> params, std::size_t width,
                                   std::span<const int> rows, std::span<const double> row_grads,
                                   AdamState& state, const AdamConfig& cfg, double lr) {
  if (params.size() != state.size() || row_grads.size() != rows.size() * width) {
    throw ShapeError("sparse adam step: size mismatch");
  }
  ++state.t;
  const auto bc = detail::bias_correction(cfg, state.t);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t base = static_cast<std::size_t>(rows[k]) * width;
    if (base + width > params.size()) throw ShapeError("sparse adam step: row out of range");
    for (std::size_t j = 0; j < width; ++j) {
      const std::size_t i = base + j;
      detail::update_coordinate(params[i], row_grads[k * width + j], state.m[i], state.v[i],
                                state.v_hat[i], cfg, bc, lr);
    }
  }
}

}  // namespace sylemb::nn
