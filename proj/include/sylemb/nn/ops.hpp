// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sylemb/errors.hpp"

namespace sylemb::nn {

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ShapeError(std::string(what) + ": size mismatch (" + std::to_string(a) + " vs " +
                     std::to_string(b) + ")");
  }
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double l2_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

inline std::vector<double> l2_normalize(std::span<const double> v) {
  const double n = l2_norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) throw ZeroNormError("cannot normalize a vector with zero norm");
  std::vector<double> out(v.begin(), v.end());
  for (auto& x : out) x /= n;
  return out;
}

inline double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (!(na > 0.0) || !(nb > 0.0)) throw ZeroNormError("cosine of a zero vector");
  return dot(a, b) / (na * nb);
}

// Max-subtracted softmax. Entries equal to -inf get probability zero.
inline std::vector<double> softmax(std::span<const double> v) {
  std::vector<double> out(v.size());
  if (v.empty()) return out;
  const double m = *std::max_element(v.begin(), v.end());
  double z = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - m);
    z += out[i];
  }
  for (auto& x : out) x /= z;
  return out;
}

inline double log_sum_exp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  double z = 0.0;
  for (double x : v) z += std::exp(x - m);
  return m + std::log(z);
}

inline double mse(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "mse");
  if (a.empty()) throw ShapeError("mse of empty tensors");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

// -log softmax(logits)[target]
inline double cross_entropy(std::span<const double> logits, std::size_t target) {
  if (target >= logits.size()) {
    throw std::out_of_range("cross_entropy: target " + std::to_string(target) + " out of range");
  }
  return log_sum_exp(logits) - logits[target];
}

inline std::vector<double> layer_norm(std::span<const double> v, std::span<const double> gain,
                                      std::span<const double> bias, double eps = 1e-5) {
  require_same_size(v.size(), gain.size(), "layer_norm gain");
  require_same_size(v.size(), bias.size(), "layer_norm bias");
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= n;
  const double inv = 1.0 / std::sqrt(var + eps);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) * inv * gain[i] + bias[i];
  return out;
}

}  // namespace sylemb::nn
