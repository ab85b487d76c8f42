// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Binary model container:
//   "SYLC" | u32 version | u64 header_bytes | JSON header | arrays
// All integers and array elements are little-endian. The header's "arrays"
// entry lists {name, shape, dtype} in payload order; dtype is "f32" or "f64".

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sylemb/errors.hpp"

namespace sylemb::io {

inline constexpr std::array<char, 4> kMagic{'S', 'Y', 'L', 'C'};
inline constexpr std::uint32_t kFormatVersion = 1;

enum class Dtype { f32, f64 };

struct ArrayRecord {
  std::string name;
  std::vector<std::size_t> shape;
  Dtype dtype = Dtype::f32;
  std::vector<double> data;

  std::size_t element_count() const {
    std::size_t n = 1;
    for (auto s : shape) n *= s;
    return n;
  }
};

struct Container {
  nlohmann::json header = nlohmann::json::object();
  std::vector<ArrayRecord> arrays;

  void add(std::string name, std::vector<std::size_t> shape, std::span<const double> data,
           Dtype dtype = Dtype::f32) {
    ArrayRecord r{std::move(name), std::move(shape), dtype, {data.begin(), data.end()}};
    if (r.element_count() != r.data.size()) throw ShapeError("array '" + r.name + "' shape does not match data");
    arrays.push_back(std::move(r));
  }

  const ArrayRecord& array(const std::string& name) const {
    for (const auto& a : arrays) {
      if (a.name == name) return a;
    }
    throw std::runtime_error("container has no array named '" + name + "'");
  }

  bool has(const std::string& name) const {
    for (const auto& a : arrays) {
      if (a.name == name) return true;
    }
    return false;
  }
};

namespace detail {

template <class U>
void put_le(std::ostream& out, U v) {
  std::array<char, sizeof(U)> b;
  for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

template <class U>
U get_le(std::istream& in, const std::string& what) {
  std::array<unsigned char, sizeof(U)> b;
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw std::runtime_error("truncated container: " + what);
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(b[i]) << (8 * i);
  return v;
}

inline std::string_view dtype_name(Dtype d) { return d == Dtype::f32 ? "f32" : "f64"; }

inline Dtype parse_dtype(const std::string& s) {
  if (s == "f32") return Dtype::f32;
  if (s == "f64") return Dtype::f64;
  throw std::runtime_error("unsupported array dtype '" + s + "'");
}

}  // namespace detail

inline void write_container(std::ostream& out, const Container& c) {
  nlohmann::json header = c.header;
  header["arrays"] = nlohmann::json::array();
  for (const auto& a : c.arrays) {
    header["arrays"].push_back({{"name", a.name}, {"shape", a.shape}, {"dtype", detail::dtype_name(a.dtype)}});
  }
  const std::string text = header.dump();
  out.write(kMagic.data(), kMagic.size());
  detail::put_le<std::uint32_t>(out, kFormatVersion);
  detail::put_le<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& a : c.arrays) {
    for (double v : a.data) {
      if (a.dtype == Dtype::f32) {
        detail::put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      } else {
        detail::put_le(out, std::bit_cast<std::uint64_t>(v));
      }
    }
  }
  if (!out) throw std::runtime_error("failed writing container");
}

inline Container read_container(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("not a sylemb container (bad magic)");
  }
  const auto version = detail::get_le<std::uint32_t>(in, "version");
  if (version != kFormatVersion) {
    throw std::runtime_error("unsupported container version " + std::to_string(version));
  }
  const auto len = detail::get_le<std::uint64_t>(in, "header length");
  if (len > (std::uint64_t{1} << 30)) throw std::runtime_error("implausible container header length");
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) throw std::runtime_error("truncated container header");
  Container c;
  c.header = nlohmann::json::parse(text);
  for (const auto& d : c.header.at("arrays")) {
    ArrayRecord r;
    r.name = d.at("name").get<std::string>();
    r.shape = d.at("shape").get<std::vector<std::size_t>>();
    r.dtype = detail::parse_dtype(d.at("dtype").get<std::string>());
    r.data.resize(r.element_count());
    for (auto& v : r.data) {
      if (r.dtype == Dtype::f32) {
        v = std::bit_cast<float>(detail::get_le<std::uint32_t>(in, r.name));
      } else {
        v = std::bit_cast<double>(detail::get_le<std::uint64_t>(in, r.name));
      }
    }
    c.arrays.push_back(std::move(r));
  }
  c.header.erase("arrays");
  return c;
}

inline void save_container(const std::string& path, const Container& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_container(out, c);
}

inline Container load_container(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open container: " + path);
  return read_container(in);
}

}  // namespace sylemb::io
