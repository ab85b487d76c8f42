// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "sylemb/io/container.hpp"
#include "sylemb/splitter/model.hpp"

namespace sylemb {

inline constexpr const char* kSplitterFormat = "sylemb-splitter";

// Header: config and character vocabulary. Arrays (f32) in the order of
// SplitterModel::parameters().
inline io::Container splitter_container(const SplitterModel& m) {
  io::Container c;
  c.header = {{"format", kSplitterFormat}, {"config", m.config.to_json()}, {"chars", m.vocab.to_json()}};
  for (const auto* p : m.parameters()) c.add(p->name, p->value.shape(), p->value.span());
  return c;
}

inline SplitterModel splitter_from_container(const io::Container& c) {
  if (c.header.value("format", "") != kSplitterFormat) {
    throw std::runtime_error("container does not hold a splitter model");
  }
  SplitterModel m(SplitterConfig::from_json(c.header.at("config")), CharVocab::from_json(c.header.at("chars")));
  for (auto* p : m.parameters()) {
    const auto& a = c.array(p->name);
    if (a.shape != p->value.shape()) throw ShapeError("array '" + p->name + "' has an unexpected shape");
    p->value.data() = a.data;
  }
  return m;
}

inline void save_splitter(std::ostream& out, const SplitterModel& m) { io::write_container(out, splitter_container(m)); }
inline void save_splitter(const std::string& path, const SplitterModel& m) {
  io::save_container(path, splitter_container(m));
}
inline SplitterModel load_splitter(std::istream& in) { return splitter_from_container(io::read_container(in)); }
inline SplitterModel load_splitter(const std::string& path) {
  return splitter_from_container(io::load_container(path));
}

}  // namespace sylemb
