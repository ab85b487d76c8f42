// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sylemb/errors.hpp"
#include "sylemb/nn/parameter.hpp"
#include "sylemb/nn/tensor.hpp"
#include "sylemb/random.hpp"

namespace sylemb::nn {

// Reverse-mode tape over row-major matrices. Nodes are appended in
// evaluation order, so reverse insertion order is a valid topological order.
// Gradients of Parameter leaves accumulate directly into Parameter::grad.
class Tape {
 public:
  struct Var {
    std::size_t id;
  };

  explicit Tape(bool record = true) : record_(record) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return record_; }
  std::size_t size() const { return nodes_.size(); }

  Var constant(Tensor value) { return push(as_matrix(std::move(value)), nullptr); }

  Var param(Parameter& p) {
    Node n;
    n.param = &p;
    nodes_.push_back(std::move(n));
    return {nodes_.size() - 1};
  }

  const Tensor& value(Var v) const {
    const auto& n = nodes_[v.id];
    return n.param ? n.param->value : n.value;
  }

  double scalar(Var v) const { return value(v)[0]; }

  void backward(Var loss) {
    if (!record_) throw std::logic_error("backward on a tape that was not recording");
    if (value(loss).size() != 1) throw ShapeError("backward requires a scalar loss");
    grad(loss.id)[0] += 1.0;
    for (std::size_t i = loss.id + 1; i-- > 0;) {
      auto& n = nodes_[i];
      if (n.backward && n.has_grad) n.backward();
    }
  }

  // ---- operations -------------------------------------------------------

  // A[n x k] * B[k x m]
  Var matmul(Var a, Var b) {
    const auto& A = value(a);
    const auto& B = value(b);
    const std::size_t n = A.rows(), k = A.cols(), m = B.cols();
    if (B.rows() != k) throw ShapeError("matmul: inner dimensions differ");
    Tensor C = Tensor::matrix(n, m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t p = 0; p < k; ++p) {
        const double aip = A[i * k + p];
        if (aip == 0.0) continue;
        const double* brow = B.data().data() + p * m;
        double* crow = C.data().data() + i * m;
        for (std::size_t j = 0; j < m; ++j) crow[j] += aip * brow[j];
      }
    }
    return push(std::move(C), [this, a, b, self = nodes_.size()] {
      const auto& A = value(a);
      const auto& B = value(b);
      const auto& dC = nodes_[self].grad;
      const std::size_t n = A.rows(), k = A.cols(), m = B.cols();
      if (needs_grad(a)) {
        auto& dA = grad(a.id);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t p = 0; p < k; ++p) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += dC[i * m + j] * B[p * m + j];
            dA[i * k + p] += s;
          }
        }
      }
      if (needs_grad(b)) {
        auto& dB = grad(b.id);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t p = 0; p < k; ++p) {
            const double aip = A[i * k + p];
            if (aip == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) dB[p * m + j] += aip * dC[i * m + j];
          }
        }
      }
    });
  }

  // A[n x k] * B[m x k]^T
  Var matmul_nt(Var a, Var b) {
    const auto& A = value(a);
    const auto& B = value(b);
    const std::size_t n = A.rows(), k = A.cols(), m = B.rows();
    if (B.cols() != k) throw ShapeError("matmul_nt: inner dimensions differ");
    Tensor C = Tensor::matrix(n, m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t p = 0; p < k; ++p) s += A[i * k + p] * B[j * k + p];
        C[i * m + j] = s;
      }
    }
    return push(std::move(C), [this, a, b, self = nodes_.size()] {
      const auto& A = value(a);
      const auto& B = value(b);
      const auto& dC = nodes_[self].grad;
      const std::size_t n = A.rows(), k = A.cols(), m = B.rows();
      if (needs_grad(a)) {
        auto& dA = grad(a.id);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < m; ++j) {
            const double g = dC[i * m + j];
            for (std::size_t p = 0; p < k; ++p) dA[i * k + p] += g * B[j * k + p];
          }
        }
      }
      if (needs_grad(b)) {
        auto& dB = grad(b.id);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < m; ++j) {
            const double g = dC[i * m + j];
            for (std::size_t p = 0; p < k; ++p) dB[j * k + p] += g * A[i * k + p];
          }
        }
      }
    });
  }

  Var add(Var a, Var b) {
    const auto& A = value(a);
    const auto& B = value(b);
    if (A.size() != B.size() || A.cols() != B.cols()) throw ShapeError("add: shapes differ");
    Tensor C = Tensor::matrix(A.rows(), A.cols());
    for (std::size_t i = 0; i < C.size(); ++i) C[i] = A[i] + B[i];
    return push(std::move(C), [this, a, b, self = nodes_.size()] {
      const auto& dC = nodes_[self].grad;
      for (Var v : {a, b}) {
        if (!needs_grad(v)) continue;
        auto& d = grad(v.id);
        for (std::size_t i = 0; i < dC.size(); ++i) d[i] += dC[i];
      }
    });
  }

  // Adds a 1 x m bias to every row.
  Var add_row(Var a, Var bias) {
    const auto& A = value(a);
    const auto& b = value(bias);
    const std::size_t n = A.rows(), m = A.cols();
    if (b.size() != m) throw ShapeError("add_row: bias width differs");
    Tensor C = Tensor::matrix(n, m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) C[i * m + j] = A[i * m + j] + b[j];
    }
    return push(std::move(C), [this, a, bias, self = nodes_.size()] {
      const auto& dC = nodes_[self].grad;
      const std::size_t m = dC.cols(), n = dC.rows();
      if (needs_grad(a)) {
        auto& dA = grad(a.id);
        for (std::size_t i = 0; i < dC.size(); ++i) dA[i] += dC[i];
      }
      if (needs_grad(bias)) {
        auto& db = grad(bias.id);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < m; ++j) db[j] += dC[i * m + j];
        }
      }
    });
  }

  Var scale(Var a, double s) {
    const auto& A = value(a);
    Tensor C = Tensor::matrix(A.rows(), A.cols());
    for (std::size_t i = 0; i < C.size(); ++i) C[i] = A[i] * s;
    return push(std::move(C), [this, a, s, self = nodes_.size()] {
      if (!needs_grad(a)) return;
      const auto& dC = nodes_[self].grad;
      auto& dA = grad(a.id);
      for (std::size_t i = 0; i < dC.size(); ++i) dA[i] += dC[i] * s;
    });
  }

  Var relu(Var a) {
    const auto& A = value(a);
    Tensor C = Tensor::matrix(A.rows(), A.cols());
    for (std::size_t i = 0; i < C.size(); ++i) C[i] = A[i] > 0.0 ? A[i] : 0.0;
    return push(std::move(C), [this, a, self = nodes_.size()] {
      if (!needs_grad(a)) return;
      const auto& A = value(a);
      const auto& dC = nodes_[self].grad;
      auto& dA = grad(a.id);
      for (std::size_t i = 0; i < dC.size(); ++i) {
        if (A[i] > 0.0) dA[i] += dC[i];
      }
    });
  }

  // Row-wise (x - mean) / sqrt(var + eps) * gain + bias.
  Var layer_norm(Var x, Var gain, Var bias, double eps = 1e-5) {
    const auto& X = value(x);
    const auto& g = value(gain);
    const auto& b = value(bias);
    const std::size_t n = X.rows(), m = X.cols();
    if (g.size() != m || b.size() != m) throw ShapeError("layer_norm: parameter width differs");
    Tensor Y = Tensor::matrix(n, m);
    Tensor xhat = Tensor::matrix(n, m);
    std::vector<double> inv(n);
    for (std::size_t i = 0; i < n; ++i) {
      double mean = 0.0;
      for (std::size_t j = 0; j < m; ++j) mean += X[i * m + j];
      mean /= static_cast<double>(m);
      double var = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double d = X[i * m + j] - mean;
        var += d * d;
      }
      var /= static_cast<double>(m);
      inv[i] = 1.0 / std::sqrt(var + eps);
      for (std::size_t j = 0; j < m; ++j) {
        xhat[i * m + j] = (X[i * m + j] - mean) * inv[i];
        Y[i * m + j] = xhat[i * m + j] * g[j] + b[j];
      }
    }
    if (!record_) return push(std::move(Y), nullptr);
    return push(std::move(Y), [this, x, gain, bias, xhat = std::move(xhat), inv = std::move(inv),
                               self = nodes_.size()] {
      const auto& dY = nodes_[self].grad;
      const auto& g = value(gain);
      const std::size_t n = dY.rows(), m = dY.cols();
      if (needs_grad(gain)) {
        auto& dg = grad(gain.id);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < m; ++j) dg[j] += dY[i * m + j] * xhat[i * m + j];
        }
      }
      if (needs_grad(bias)) {
        auto& db = grad(bias.id);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < m; ++j) db[j] += dY[i * m + j];
        }
      }
      if (needs_grad(x)) {
        auto& dX = grad(x.id);
        const double inv_m = 1.0 / static_cast<double>(m);
        for (std::size_t i = 0; i < n; ++i) {
          double mean_d = 0.0, mean_dx = 0.0;
          for (std::size_t j = 0; j < m; ++j) {
            const double dxh = dY[i * m + j] * g[j];
            mean_d += dxh;
            mean_dx += dxh * xhat[i * m + j];
          }
          mean_d *= inv_m;
          mean_dx *= inv_m;
          for (std::size_t j = 0; j < m; ++j) {
            const double dxh = dY[i * m + j] * g[j];
            dX[i * m + j] += inv[i] * (dxh - mean_d - xhat[i * m + j] * mean_dx);
          }
        }
      }
    });
  }

  // Row-wise softmax. With `causal`, entry (i, j) for j > i is masked out.
  Var softmax_rows(Var a, bool causal = false) {
    const auto& A = value(a);
    const std::size_t n = A.rows(), m = A.cols();
    Tensor P = Tensor::matrix(n, m);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t limit = causal ? std::min(m, i + 1) : m;
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < limit; ++j) mx = std::max(mx, A[i * m + j]);
      double z = 0.0;
      for (std::size_t j = 0; j < limit; ++j) {
        P[i * m + j] = std::exp(A[i * m + j] - mx);
        z += P[i * m + j];
      }
      for (std::size_t j = 0; j < limit; ++j) P[i * m + j] /= z;
    }
    return push(std::move(P), [this, a, self = nodes_.size()] {
      if (!needs_grad(a)) return;
      const auto& P = nodes_[self].value;
      const auto& dP = nodes_[self].grad;
      auto& dA = grad(a.id);
      const std::size_t n = P.rows(), m = P.cols();
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += P[i * m + j] * dP[i * m + j];
        for (std::size_t j = 0; j < m; ++j) dA[i * m + j] += P[i * m + j] * (dP[i * m + j] - s);
      }
    });
  }

  Var slice_cols(Var a, std::size_t start, std::size_t width) {
    const auto& A = value(a);
    const std::size_t n = A.rows(), m = A.cols();
    if (start + width > m) throw ShapeError("slice_cols: range exceeds width");
    Tensor C = Tensor::matrix(n, width);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < width; ++j) C[i * width + j] = A[i * m + start + j];
    }
    return push(std::move(C), [this, a, start, width, self = nodes_.size()] {
      if (!needs_grad(a)) return;
      const auto& dC = nodes_[self].grad;
      auto& dA = grad(a.id);
      const std::size_t n = dC.rows(), m = dA.cols();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < width; ++j) dA[i * m + start + j] += dC[i * width + j];
      }
    });
  }

  Var concat_cols(const std::vector<Var>& parts) {
    if (parts.empty()) throw ShapeError("concat_cols: no inputs");
    const std::size_t n = value(parts[0]).rows();
    std::size_t m = 0;
    for (Var p : parts) {
      if (value(p).rows() != n) throw ShapeError("concat_cols: row counts differ");
      m += value(p).cols();
    }
    Tensor C = Tensor::matrix(n, m);
    std::size_t off = 0;
    for (Var p : parts) {
      const auto& P = value(p);
      const std::size_t w = P.cols();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < w; ++j) C[i * m + off + j] = P[i * w + j];
      }
      off += w;
    }
    return push(std::move(C), [this, parts, self = nodes_.size()] {
      const auto& dC = nodes_[self].grad;
      const std::size_t n = dC.rows(), m = dC.cols();
      std::size_t off = 0;
      for (Var p : parts) {
        const std::size_t w = value(p).cols();
        if (needs_grad(p)) {
          auto& dP = grad(p.id);
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < w; ++j) dP[i * w + j] += dC[i * m + off + j];
          }
        }
        off += w;
      }
    });
  }

  // Rows of `table` selected by `ids` (repeats allowed).
  Var gather_rows(Var table, std::span<const int> ids) {
    const auto& T = value(table);
    const std::size_t m = T.cols();
    Tensor C = Tensor::matrix(ids.size(), m);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= T.rows()) {
        throw std::out_of_range("gather_rows: id out of range");
      }
      const auto r = T.row(static_cast<std::size_t>(ids[i]));
      std::copy(r.begin(), r.end(), C.row(i).begin());
    }
    std::vector<int> rows(ids.begin(), ids.end());
    return push(std::move(C), [this, table, rows = std::move(rows), self = nodes_.size()] {
      if (!needs_grad(table)) return;
      const auto& dC = nodes_[self].grad;
      auto& dT = grad(table.id);
      const std::size_t m = dC.cols();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = static_cast<std::size_t>(rows[i]);
        for (std::size_t j = 0; j < m; ++j) dT[r * m + j] += dC[i * m + j];
      }
    });
  }

  // Inverted dropout; identity when p == 0.
  Var dropout(Var a, double p, Rng& rng) {
    if (p <= 0.0) return a;
    if (p >= 1.0) throw ConfigError("dropout probability must be < 1");
    const auto& A = value(a);
    Tensor mask = Tensor::matrix(A.rows(), A.cols());
    Tensor C = Tensor::matrix(A.rows(), A.cols());
    const double keep = 1.0 / (1.0 - p);
    for (std::size_t i = 0; i < C.size(); ++i) {
      mask[i] = rng.uniform() < p ? 0.0 : keep;
      C[i] = A[i] * mask[i];
    }
    return push(std::move(C), [this, a, mask = std::move(mask), self = nodes_.size()] {
      if (!needs_grad(a)) return;
      const auto& dC = nodes_[self].grad;
      auto& dA = grad(a.id);
      for (std::size_t i = 0; i < dC.size(); ++i) dA[i] += dC[i] * mask[i];
    });
  }

  // Sum over rows of -log softmax(row)[target]. Returns a 1 x 1 node.
  Var cross_entropy_sum(Var logits, std::span<const int> targets) {
    const auto& L = value(logits);
    const std::size_t n = L.rows(), m = L.cols();
    if (targets.size() != n) throw ShapeError("cross_entropy_sum: one target per row required");
    Tensor probs = Tensor::matrix(n, m);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (targets[i] < 0 || static_cast<std::size_t>(targets[i]) >= m) {
        throw std::out_of_range("cross_entropy_sum: target out of range");
      }
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < m; ++j) mx = std::max(mx, L[i * m + j]);
      double z = 0.0;
      for (std::size_t j = 0; j < m; ++j) z += std::exp(L[i * m + j] - mx);
      const double lse = mx + std::log(z);
      for (std::size_t j = 0; j < m; ++j) probs[i * m + j] = std::exp(L[i * m + j] - lse);
      total += lse - L[i * m + static_cast<std::size_t>(targets[i])];
    }
    Tensor out = Tensor::matrix(1, 1);
    out[0] = total;
    std::vector<int> t(targets.begin(), targets.end());
    return push(std::move(out), [this, logits, probs = std::move(probs), t = std::move(t),
                                 self = nodes_.size()] {
      if (!needs_grad(logits)) return;
      const double g = nodes_[self].grad[0];
      auto& dL = grad(logits.id);
      const std::size_t m = probs.cols();
      for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          const double onehot = static_cast<int>(j) == t[i] ? 1.0 : 0.0;
          dL[i * m + j] += g * (probs[i * m + j] - onehot);
        }
      }
    });
  }

  // Sum of all entries, as a 1 x 1 node.
  Var sum(Var a) {
    const auto& A = value(a);
    Tensor out = Tensor::matrix(1, 1);
    for (double v : A.data()) out[0] += v;
    return push(std::move(out), [this, a, self = nodes_.size()] {
      if (!needs_grad(a)) return;
      const double g = nodes_[self].grad[0];
      auto& dA = grad(a.id);
      for (std::size_t i = 0; i < dA.size(); ++i) dA[i] += g;
    });
  }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    Parameter* param = nullptr;
    bool has_grad = false;
    bool constant = false;
    std::function<void()> backward;
  };

  static Tensor as_matrix(Tensor t) {
    if (t.rank() == 2) return t;
    const std::size_t n = t.size();
    return Tensor({1, n}, std::move(t.data()));
  }

  Var push(Tensor value, std::function<void()> backward) {
    Node n;
    n.value = std::move(value);
    n.constant = !backward;
    if (record_) n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return {nodes_.size() - 1};
  }

  bool needs_grad(Var v) const { return !nodes_[v.id].constant || nodes_[v.id].param; }

  Tensor& grad(std::size_t id) {
    auto& n = nodes_[id];
    n.has_grad = true;
    if (n.param) return n.param->grad;
    if (n.grad.size() != n.value.size()) n.grad = Tensor(n.value.shape());
    return n.grad;
  }

  bool record_;
  std::vector<Node> nodes_;
};

}  // namespace sylemb::nn
