// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace sylemb::nn {

// lr0 / (e/2 + 1), e being the zero-based epoch.
inline double lr_at_epoch(int epoch, double lr0) {
  if (epoch < 0) throw std::invalid_argument("epoch must be non-negative");
  return lr0 / (static_cast<double>(epoch) / 2.0 + 1.0);
}

}  // namespace sylemb::nn
