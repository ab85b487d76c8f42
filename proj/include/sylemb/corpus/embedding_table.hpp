// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sylemb/errors.hpp"
#include "sylemb/utf8.hpp"

namespace sylemb {

// Fixed word -> vector map. Rows are stored contiguously in insertion order.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw ShapeError("embedding dimension must be positive");
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  // Returns false (and leaves the table unchanged) if the word already exists.
  bool add(const std::string& word, std::span<const double> vec) {
    if (vec.size() != dim_) {
      throw ShapeError("vector for '" + word + "' has " + std::to_string(vec.size()) +
                       " components, expected " + std::to_string(dim_));
    }
    if (index_.count(word)) return false;
    index_.emplace(word, words_.size());
    words_.push_back(word);
    data_.insert(data_.end(), vec.begin(), vec.end());
    return true;
  }

  bool contains(const std::string& word) const { return index_.count(word) != 0; }

  std::optional<std::span<const double>> find(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return row(it->second);
  }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * dim_, dim_);
  }

  const std::vector<std::string>& words() const { return words_; }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    if (i >= line.size()) break;
    const auto j = line.find(' ', i);
    out.push_back(line.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
    if (j == std::string_view::npos) break;
    i = j;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

struct EmbeddingLoadReport {
  std::size_t rows = 0;
  std::size_t duplicates = 0;  // lowercased collisions; first occurrence kept
  std::optional<std::int64_t> header_count;
};

// Word2vec-style text format: optional "<count> <dim>" header, then one
// "token v1 ... vD" row per line. Tokens are lowercased.
inline EmbeddingTable load_embeddings(std::istream& in, const std::string& source = "<stream>",
                                      EmbeddingLoadReport* report = nullptr) {
  EmbeddingLoadReport local;
  auto& rep = report ? *report : local;
  EmbeddingTable table;
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  std::vector<double> vec;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = detail::split_spaces(line);
    if (fields.empty()) continue;
    if (first) {
      first = false;
      if (fields.size() == 2) {
        const auto count = detail::parse_int(fields[0]);
        const auto d = detail::parse_int(fields[1]);
        if (count && d) {
          if (*d <= 0) throw ParseError(source, lineno, "header dimension must be positive");
          dim = static_cast<std::size_t>(*d);
          rep.header_count = *count;
          table = EmbeddingTable(dim);
          continue;
        }
      }
    }
    if (fields.size() < 2) throw ParseError(source, lineno, "row has no vector components");
    const std::size_t row_dim = fields.size() - 1;
    if (dim == 0) {
      dim = row_dim;
      table = EmbeddingTable(dim);
    } else if (row_dim != dim) {
      throw ParseError(source, lineno,
                       "dimension mismatch: row has " + std::to_string(row_dim) +
                           " components, expected " + std::to_string(dim));
    }
    vec.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      const auto v = detail::parse_double(fields[k + 1]);
      if (!v) throw ParseError(source, lineno, "non-numeric field '" + std::string(fields[k + 1]) + "'");
      vec[k] = *v;
    }
    if (table.add(utf8::to_lower(fields[0]), vec)) {
      ++rep.rows;
    } else {
      ++rep.duplicates;
    }
  }
  if (dim == 0) throw ParseError(source, lineno, "no embedding rows found");
  return table;
}

inline EmbeddingTable load_embeddings(const std::string& path, EmbeddingLoadReport* report = nullptr) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);
  return load_embeddings(in, path, report);
}

// Writes the text format with a header line. Values use the shortest
// round-tripping representation.
inline void write_embeddings(std::ostream& out, const std::vector<std::string>& words,
                             const std::vector<std::vector<double>>& vectors, std::size_t dim) {
  out << words.size() << ' ' << dim << '\n';
  char buf[64];
  for (std::size_t i = 0; i < words.size(); ++i) {
    out << words[i];
    for (double v : vectors[i]) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

}  // namespace sylemb
