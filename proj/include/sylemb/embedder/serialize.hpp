// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "sylemb/embedder/model.hpp"
#include "sylemb/io/container.hpp"

namespace sylemb {

inline constexpr const char* kEmbedderFormat = "sylemb-embedder";

// Header: kind, dim, out_dim, vocab (index order), variant marking.
// Arrays (f32): syllable_table, then W_q, W_k, b_k, W_e, b_e as present.
inline io::Container embedder_container(const EmbedderModel& m) {
  io::Container c;
  c.header = {{"format", kEmbedderFormat},
              {"kind", to_string(m.kind)},
              {"dim", m.dim},
              {"out_dim", m.out_dim},
              {"vocab", m.vocab.tokens()},
              {"marking", m.marking.to_json()}};
  for (const auto* p : m.parameters()) c.add(p->name, p->value.shape(), p->value.span());
  return c;
}

inline EmbedderModel embedder_from_container(const io::Container& c) {
  if (c.header.value("format", "") != kEmbedderFormat) {
    throw std::runtime_error("container does not hold an embedder model");
  }
  EmbedderModel m(parse_composer_kind(c.header.at("kind").get<std::string>()),
                  c.header.at("dim").get<std::size_t>(), c.header.at("out_dim").get<std::size_t>(),
                  SyllableVocab(c.header.at("vocab").get<std::vector<std::string>>()),
                  VariantMarking::from_json(c.header.at("marking")));
  for (auto* p : m.parameters()) {
    const auto& a = c.array(p->name);
    if (a.shape != p->value.shape()) {
      throw ShapeError("array '" + p->name + "' has shape " + nn::shape_string(a.shape) + ", expected " +
                       nn::shape_string(p->value.shape()));
    }
    p->value.data() = a.data;
  }
  return m;
}

inline void save_embedder(std::ostream& out, const EmbedderModel& m) { io::write_container(out, embedder_container(m)); }
inline void save_embedder(const std::string& path, const EmbedderModel& m) {
  io::save_container(path, embedder_container(m));
}
inline EmbedderModel load_embedder(std::istream& in) { return embedder_from_container(io::read_container(in)); }
inline EmbedderModel load_embedder(const std::string& path) {
  return embedder_from_container(io::load_container(path));
}

}  // namespace sylemb
