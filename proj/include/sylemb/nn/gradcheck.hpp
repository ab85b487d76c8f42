// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "sylemb/errors.hpp"

namespace sylemb::nn {

struct GradCheckReport {
  // max |a - n| / (|a| + |n| + 1e-12) over coordinates with a non-negligible
  // gradient (max(|a|, |n|) >= zero_floor).
  double max_rel_error = 0.0;
  // max |a - n| over the remaining coordinates, where the relative measure is
  // dominated by finite-difference round-off.
  double max_abs_error_near_zero = 0.0;
  std::size_t coordinates = 0;
  std::size_t near_zero = 0;

  bool passed(double rel_tol, double abs_tol = 1e-9) const {
    return max_rel_error < rel_tol && max_abs_error_near_zero < abs_tol;
  }
};

// Central finite differences against analytic gradients. `loss` is evaluated
// with each coordinate of `params` perturbed in place by +-step; the original
// values are restored.
inline GradCheckReport check_gradient(const std::function<double()>& loss,
                                      const std::vector<std::span<double>>& params,
                                      const std::vector<std::span<const double>>& analytic,
                                      double step = 1e-5, double zero_floor = 1e-6) {
  if (params.size() != analytic.size()) throw ShapeError("check_gradient: group count mismatch");
  GradCheckReport rep;
  for (std::size_t g = 0; g < params.size(); ++g) {
    if (params[g].size() != analytic[g].size()) throw ShapeError("check_gradient: group size mismatch");
    for (std::size_t i = 0; i < params[g].size(); ++i) {
      double& x = params[g][i];
      const double saved = x;
      x = saved + step;
      const double up = loss();
      x = saved - step;
      const double down = loss();
      x = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[g][i];
      const double diff = std::abs(a - numeric);
      ++rep.coordinates;
      if (std::max(std::abs(a), std::abs(numeric)) < zero_floor) {
        ++rep.near_zero;
        rep.max_abs_error_near_zero = std::max(rep.max_abs_error_near_zero, diff);
      } else {
        rep.max_rel_error =
            std::max(rep.max_rel_error, diff / (std::abs(a) + std::abs(numeric) + 1e-12));
      }
    }
  }
  return rep;
}

// Convenience form for a function of a single flat parameter vector.
inline GradCheckReport check_gradient(const std::function<double(std::span<const double>)>& f,
                                      std::span<const double> analytic, std::vector<double> theta,
                                      double step = 1e-5, double zero_floor = 1e-6) {
  std::span<double> view(theta);
  return check_gradient([&] { return f(theta); }, {view}, {analytic}, step, zero_floor);
}

}  // namespace sylemb::nn
