// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstring>
#include <sstream>

#include <gtest/gtest.h>

#include "sylemb/io/container.hpp"

using namespace sylemb;

namespace {

io::Container sample() {
  io::Container c;
  c.header = {{"format", "test"}, {"n", 3}};
  const std::vector<double> a{1.0, -2.5, 1.0 / 3.0, 4.0, 5.0, 6.0};
  const std::vector<double> b{0.1, 1e-300};
  c.add("a", {2, 3}, a);
  c.add("b", {2}, b, io::Dtype::f64);
  return c;
}

std::string bytes_of(const io::Container& c) {
  std::ostringstream out;
  io::write_container(out, c);
  return out.str();
}

}  // namespace

TEST(Container, RoundTrip) {
  std::istringstream in(bytes_of(sample()));
  const auto c = io::read_container(in);
  EXPECT_EQ(c.header.at("format"), "test");
  EXPECT_FALSE(c.header.contains("arrays"));
  const auto& a = c.array("a");
  EXPECT_EQ(a.shape, (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(a.data[1], -2.5);
  EXPECT_EQ(a.data[2], static_cast<double>(1.0f / 3.0f));
  const auto& b = c.array("b");
  EXPECT_EQ(b.dtype, io::Dtype::f64);
  EXPECT_EQ(b.data[0], 0.1);
  EXPECT_EQ(b.data[1], 1e-300);
  EXPECT_TRUE(c.has("b"));
  EXPECT_FALSE(c.has("c"));
  EXPECT_THROW(c.array("c"), std::runtime_error);
}

TEST(Container, ByteLayout) {
  const auto s = bytes_of(sample());
  ASSERT_GE(s.size(), 16u);
  EXPECT_EQ(s.substr(0, 4), "SYLC");
  EXPECT_EQ(static_cast<unsigned char>(s[4]), 1u);
  EXPECT_EQ(s[5] | s[6] | s[7], 0);
  std::uint64_t len = 0;
  for (int i = 7; i >= 0; --i) len = (len << 8) | static_cast<unsigned char>(s[8 + i]);
  const auto header = nlohmann::json::parse(s.substr(16, len));
  EXPECT_EQ(header.at("arrays").size(), 2u);
  EXPECT_EQ(header.at("arrays")[0].at("dtype"), "f32");
  EXPECT_EQ(s.size(), 16 + len + 6 * 4 + 2 * 8);
  // First f32 value, little endian.
  float first = 0;
  const unsigned char* p = reinterpret_cast<const unsigned char*>(s.data() + 16 + len);
  std::uint32_t bits = p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
  std::memcpy(&first, &bits, 4);
  EXPECT_EQ(first, 1.0f);
}

TEST(Container, RejectsMalformedInput) {
  auto s = bytes_of(sample());
  {
    auto bad = s;
    bad[0] = 'X';
    std::istringstream in(bad);
    EXPECT_THROW(io::read_container(in), std::runtime_error);
  }
  {
    auto bad = s;
    bad[4] = 2;
    std::istringstream in(bad);
    EXPECT_THROW(io::read_container(in), std::runtime_error);
  }
  {
    std::istringstream in(s.substr(0, s.size() - 3));
    EXPECT_THROW(io::read_container(in), std::runtime_error);
  }
  {
    auto bad = s;
    bad[15] = 0x7f;
    std::istringstream in(bad);
    EXPECT_THROW(io::read_container(in), std::runtime_error);
  }
  io::Container c;
  const std::vector<double> three{1, 2, 3};
  EXPECT_THROW(c.add("x", {2, 2}, three), ShapeError);
}
