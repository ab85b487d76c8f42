// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "sylemb/corpus/training_set.hpp"
#include "sylemb/io/container.hpp"

namespace sylemb::io {

inline constexpr const char* kTrainingSetFormat = "sylemb-training-set";

// Header: dim, marking, and per example the word with its plain syllables.
// One f64 array "targets" of shape N x dim keeps source vectors exact.
inline Container training_set_container(const TrainingSet& ts) {
  Container c;
  nlohmann::json words = nlohmann::json::array();
  std::vector<double> targets;
  targets.reserve(ts.size() * ts.dim);
  for (const auto& ex : ts.examples) {
    words.push_back({ex.word, ex.base});
    targets.insert(targets.end(), ex.target.begin(), ex.target.end());
  }
  c.header = {{"format", kTrainingSetFormat}, {"dim", ts.dim}, {"marking", ts.marking.to_json()}, {"examples", words}};
  c.add("targets", {ts.size(), ts.dim}, targets, Dtype::f64);
  return c;
}

inline TrainingSet training_set_from_container(const Container& c) {
  if (c.header.value("format", "") != kTrainingSetFormat) {
    throw std::runtime_error("container does not hold a training set");
  }
  TrainingSet ts;
  ts.dim = c.header.at("dim").get<std::size_t>();
  ts.marking = VariantMarking::from_json(c.header.at("marking"));
  const auto& targets = c.array("targets");
  const auto& words = c.header.at("examples");
  if (targets.shape != std::vector<std::size_t>{words.size(), ts.dim}) {
    throw ShapeError("training set targets do not match the example list");
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    TrainingExample ex;
    ex.word = words[i].at(0).get<std::string>();
    ex.base = words[i].at(1).get<std::vector<std::string>>();
    ex.syllables = ts.marking.apply(ex.base);
    ex.target.assign(targets.data.begin() + static_cast<std::ptrdiff_t>(i * ts.dim),
                     targets.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * ts.dim));
    ts.examples.push_back(std::move(ex));
  }
  ts.reindex();
  return ts;
}

inline void save_training_set(const std::string& path, const TrainingSet& ts) {
  save_container(path, training_set_container(ts));
}

inline TrainingSet load_training_set(const std::string& path) {
  return training_set_from_container(load_container(path));
}

}  // namespace sylemb::io
