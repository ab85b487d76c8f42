// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "sylemb/errors.hpp"
#include "sylemb/nn/adam.hpp"

namespace sylemb {

struct SplitterConfig {
  int layers = 1;      // encoder and decoder layers each
  int embedding = 64;  // model width
  int heads = 8;
  int hidden = 256;    // feed-forward width
  double dropout = 0.1;
  int epochs = 10;
  int patience = 2;    // epochs without eval-loss improvement before stopping; 0 disables
  std::uint64_t seed = 0;
  nn::AdamConfig adam = default_adam();

  static nn::AdamConfig default_adam() {
    nn::AdamConfig a;
    a.lr0 = 5e-3;
    return a;
  }

  // Throws ConfigError; called by every constructor of a model.
  void validate() const {
    if (layers < 1) throw ConfigError("layers must be at least 1");
    if (embedding < 1) throw ConfigError("embedding must be positive");
    if (hidden < 1) throw ConfigError("hidden must be positive");
    if (heads < 1) throw ConfigError("heads must be at least 1");
    if (heads * 4 > embedding) {
      throw ConfigError("heads (" + std::to_string(heads) + ") must be at most one fourth of embedding (" +
                        std::to_string(embedding) + ")");
    }
    if (embedding % heads != 0) throw ConfigError("embedding must be divisible by heads");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
    if (epochs < 1) throw ConfigError("epochs must be at least 1");
    if (patience < 0) throw ConfigError("patience must be non-negative");
    adam.validate();
  }

  nlohmann::json to_json() const {
    return {{"layers", layers},   {"embedding", embedding}, {"heads", heads},
            {"hidden", hidden},   {"dropout", dropout},     {"epochs", epochs},
            {"patience", patience}, {"seed", seed},         {"lr0", adam.lr0}};
  }

  static SplitterConfig from_json(const nlohmann::json& j) {
    SplitterConfig c;
    c.layers = j.at("layers").get<int>();
    c.embedding = j.at("embedding").get<int>();
    c.heads = j.at("heads").get<int>();
    c.hidden = j.at("hidden").get<int>();
    c.dropout = j.value("dropout", c.dropout);
    c.epochs = j.value("epochs", c.epochs);
    c.patience = j.value("patience", c.patience);
    c.seed = j.value("seed", c.seed);
    c.adam.lr0 = j.value("lr0", c.adam.lr0);
    c.validate();
    return c;
  }
};

}  // namespace sylemb
