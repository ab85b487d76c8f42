// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "sylemb/embedder/model.hpp"
#include "sylemb/nn/ops.hpp"

namespace sylemb {

// Gradient of the per-example MSE loss. The syllable table gradient is kept
// row-sparse: only rows referenced by the example are stored.
struct EmbedderGradients {
  std::vector<int> rows;          // unique syllable ids, ascending
  std::vector<double> row_grads;  // rows.size() x dim
  nn::Tensor w_q, w_k, b_k, w_e, b_e;

  // Dense V x D table gradient (used by gradient checks).
  std::vector<double> dense_table(std::size_t vocab_size, std::size_t dim) const {
    std::vector<double> out(vocab_size * dim, 0.0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      std::copy_n(row_grads.begin() + static_cast<std::ptrdiff_t>(k * dim), dim,
                  out.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(rows[k]) * dim));
    }
    return out;
  }
};

namespace detail {

inline void outer_into(nn::Tensor& out, std::span<const double> u, std::span<const double> v,
                       double scale = 1.0) {
  const std::size_t m = v.size();
  for (std::size_t a = 0; a < u.size(); ++a) {
    const double ua = u[a] * scale;
    for (std::size_t b = 0; b < m; ++b) out[a * m + b] = ua * v[b];
  }
}

}  // namespace detail

// Returns mse(compose(ids), target) and fills `g`.
inline double loss_and_gradient(const EmbedderModel& m, std::span<const int> ids,
                                std::span<const double> target, EmbedderGradients& g) {
  if (target.size() != m.out_dim) {
    throw ShapeError("target has " + std::to_string(target.size()) + " components, model outputs " +
                     std::to_string(m.out_dim));
  }
  const std::size_t D = m.dim;
  const std::size_t O = m.out_dim;
  const std::size_t n = ids.size();
  const CompositionTrace tr = m.has_attention() ? trace_attention(m, ids) : trace_vanilla(m, ids);
  const double loss = nn::mse(tr.output, target);

  // d loss / d output, then through the normalization y = u / |u|.
  std::vector<double> dy(O);
  for (std::size_t o = 0; o < O; ++o) dy[o] = 2.0 * (tr.output[o] - target[o]) / static_cast<double>(O);
  const double ydy = nn::dot(tr.output, dy);
  std::vector<double> du(O);
  for (std::size_t o = 0; o < O; ++o) du[o] = (dy[o] - tr.output[o] * ydy) / tr.norm;

  g.rows.assign(ids.begin(), ids.end());
  std::sort(g.rows.begin(), g.rows.end());
  g.rows.erase(std::unique(g.rows.begin(), g.rows.end()), g.rows.end());
  g.row_grads.assign(g.rows.size() * D, 0.0);
  auto row_grad = [&](int id) {
    const auto k = static_cast<std::size_t>(std::lower_bound(g.rows.begin(), g.rows.end(), id) - g.rows.begin());
    return std::span<double>(g.row_grads).subspan(k * D, D);
  };

  if (!m.has_attention()) {
    for (int id : ids) {
      auto r = row_grad(id);
      for (std::size_t a = 0; a < D; ++a) r[a] += du[a];
    }
    return loss;
  }

  std::vector<double> dp(D);
  if (m.kind == ComposerKind::attention2) {
    const auto& We = m.w_e.value;
    for (std::size_t a = 0; a < D; ++a) {
      double s = 0.0;
      for (std::size_t o = 0; o < O; ++o) s += We[a * O + o] * du[o];
      dp[a] = s;
    }
    g.w_e = nn::Tensor({D, O});
    detail::outer_into(g.w_e, tr.pooled, du);
    g.b_e = nn::Tensor({O}, du);
  } else {
    dp = du;
  }

  // Pooling p = sum alpha_i s_i.
  std::vector<double> dalpha(n);
  for (std::size_t i = 0; i < n; ++i) {
    dalpha[i] = nn::dot(dp, m.syllable(ids[i]));
    auto r = row_grad(ids[i]);
    for (std::size_t a = 0; a < D; ++a) r[a] += tr.weights[i] * dp[a];
  }
  // Softmax.
  double avg = 0.0;
  for (std::size_t i = 0; i < n; ++i) avg += tr.weights[i] * dalpha[i];
  std::vector<double> dz(n);
  double dz_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dz[i] = tr.weights[i] * (dalpha[i] - avg);
    dz_sum += dz[i];
  }
  // Scores z_i = q . (W_k s_i + b_k) / sqrt(D).
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(D));
  const auto& Wk = m.w_k.value;
  const auto& Wq = m.w_q.value;
  std::vector<double> w(D, 0.0);  // sum_i dz_i s_i
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = m.syllable(ids[i]);
    for (std::size_t a = 0; a < D; ++a) w[a] += dz[i] * row[a];
  }
  std::vector<double> dq(D);
  for (std::size_t a = 0; a < D; ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < D; ++b) s += Wk[a * D + b] * w[b];
    dq[a] = (s + m.b_k.value[a] * dz_sum) * inv_sqrt_d;
  }
  g.w_k = nn::Tensor({D, D});
  detail::outer_into(g.w_k, tr.query, w, inv_sqrt_d);
  g.b_k = nn::Tensor({D});
  for (std::size_t a = 0; a < D; ++a) g.b_k[a] = tr.query[a] * dz_sum * inv_sqrt_d;
  std::vector<double> r(D, 0.0);  // W_k^T q
  for (std::size_t a = 0; a < D; ++a) {
    for (std::size_t b = 0; b < D; ++b) r[b] += Wk[a * D + b] * tr.query[a];
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto rg = row_grad(ids[i]);
    const double c = dz[i] * inv_sqrt_d;
    for (std::size_t a = 0; a < D; ++a) rg[a] += c * r[a];
  }
  // Query q = W_q c and context c = mean(s_i).
  g.w_q = nn::Tensor({D, D});
  detail::outer_into(g.w_q, dq, tr.context);
  std::vector<double> dc(D, 0.0);
  for (std::size_t a = 0; a < D; ++a) {
    for (std::size_t b = 0; b < D; ++b) dc[b] += Wq[a * D + b] * dq[a];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int id : ids) {
    auto rg = row_grad(id);
    for (std::size_t a = 0; a < D; ++a) rg[a] += dc[a] * inv_n;
  }
  return loss;
}

}  // namespace sylemb
