// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "sylemb/evaluation/annotation.hpp"
#include "sylemb/evaluation/correlation.hpp"
#include "sylemb/evaluation/pairs.hpp"

using namespace sylemb;
using sylemb::testing::oracle_pearson;
using sylemb::testing::oracle_ranks;
using sylemb::testing::oracle_spearman;

namespace {

std::vector<double> digits(std::size_t code, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i, code /= 4) v[i] = static_cast<double>(code % 4);
  return v;
}

// Compares library and oracle on one pair of lists; constant inputs must
// throw.
void check_against_oracle(const std::vector<double>& x, const std::vector<double>& y, std::size_t& checked) {
  const auto p = oracle_pearson(x, y);
  if (!p) {
    ASSERT_THROW(pearson(x, y), UndefinedCorrelationError);
    ASSERT_THROW(spearman(x, y), UndefinedCorrelationError);
    return;
  }
  ASSERT_NEAR(pearson(x, y), *p, 1e-12);
  ASSERT_NEAR(spearman(x, y), *oracle_spearman(x, y), 1e-12);
  ++checked;
}

}  // namespace

TEST(Pearson, Examples) {
  EXPECT_NEAR(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}), 1.0, 1e-15);
  EXPECT_NEAR(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{6, 4, 2}), -1.0, 1e-15);
  // sxy = 4.5, sxx = 5, syy = 4.75
  EXPECT_NEAR(pearson(std::vector<double>{0, 1, 2, 3}, std::vector<double>{0, 1, 1, 3}), 4.5 / std::sqrt(23.75),
              1e-12);
}

TEST(Pearson, Errors) {
  EXPECT_THROW(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), UndefinedCorrelationError);
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
}

TEST(Pearson, AffineProperty) {
  Rng rng(1);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> x(2 + rng.below(20)), y(x.size());
    for (auto& v : x) v = rng.uniform(-5, 5);
    const double a = rng.uniform(0.1, 10) * (rng.uniform() < 0.5 ? -1 : 1);
    const double b = rng.uniform(-100, 100);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] + b;
    EXPECT_NEAR(pearson(x, y), a > 0 ? 1.0 : -1.0, 1e-9);
    std::vector<double> z(x.size());
    for (auto& v : z) v = rng.uniform(-5, 5);
    EXPECT_NEAR(pearson(x, z), pearson(z, x), 1e-15);
  }
}

TEST(Spearman, Examples) {
  EXPECT_NEAR(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{10, 20, 30}), 1.0, 1e-15);
  EXPECT_NEAR(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}), -1.0, 1e-15);
  // Ranks (1, 2.5, 2.5, 4) and (1, 3, 2, 4): sxy = 4.5, sxx = 4.5, syy = 5.
  EXPECT_NEAR(spearman(std::vector<double>{1, 2, 2, 4}, std::vector<double>{1, 3, 2, 4}), 3.0 / std::sqrt(10.0),
              1e-12);
  EXPECT_EQ(average_ranks(std::vector<double>{5, 1, 5, 3}), (std::vector<double>{3.5, 1, 3.5, 2}));
}

TEST(Correlation, ExhaustiveShortLists) {
  std::size_t checked = 0;
  for (std::size_t n = 2; n <= 4; ++n) {
    const std::size_t total = std::size_t{1} << (2 * n);
    for (std::size_t a = 0; a < total; ++a)
      for (std::size_t b = 0; b < total; ++b) check_against_oracle(digits(a, n), digits(b, n), checked);
  }
  Rng rng(2);
  for (std::size_t n = 5; n <= 8; ++n) {
    const std::size_t total = std::size_t{1} << (2 * n);
    for (std::size_t a = 0; a < total; ++a) {
      for (int k = 0; k < 3; ++k) check_against_oracle(digits(a, n), digits(rng.below(total), n), checked);
    }
  }
  EXPECT_GT(checked, 200000u);
}

TEST(Spearman, MonotoneInvariance) {
  Rng rng(3);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> x(3 + rng.below(30)), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = std::round(rng.uniform(-3, 3) * 2) / 2;  // coarse grid for ties
      y[i] = rng.uniform(-3, 3);
    }
    std::optional<double> ref;
    try {
      ref = spearman(x, y);
    } catch (const UndefinedCorrelationError&) {
      continue;
    }
    std::vector<double> fx(x.size()), gy(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      fx[i] = std::exp(x[i]) + x[i] * x[i] * x[i];
      gy[i] = std::atan(y[i]) * 5 - 2;
    }
    EXPECT_NEAR(spearman(fx, gy), *ref, 1e-12);
    EXPECT_EQ(oracle_ranks(x), average_ranks(x));
  }
}

namespace {

EmbeddingTable toy_vectors() {
  EmbeddingTable t(2);
  t.add("a", std::vector<double>{1, 0});
  t.add("b", std::vector<double>{1, 1});
  t.add("c", std::vector<double>{0, 1});
  t.add("d", std::vector<double>{-1, 0});
  return t;
}

PairDataset parse_pairs(const std::string& text) {
  std::istringstream in(text);
  return load_pairs(in, "toy");
}

}  // namespace

TEST(EvaluatePairs, ThreePairOracle) {
  const auto table = toy_vectors();
  // Cosines 0.7071, 0, -1 against gold 1, 3, 2: ranks (3, 2, 1) vs (1, 3, 2).
  const auto ds = parse_pairs("word1\tword2\tscore\na\tb\t1\na\tc\t3\na\td\t2\n");
  const auto rep = evaluate_pairs(table_embed_fn(table), ds);
  EXPECT_NEAR(rep.spearman, -0.5, 1e-12);
  EXPECT_EQ(rep.pairs_used, 3u);
  EXPECT_EQ(rep.missing_words, 0u);
  EXPECT_NEAR(*rep.pairs[0].similarity, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(*rep.pairs[2].similarity, -1.0, 1e-15);
}

TEST(EvaluatePairs, MissingWordSkipsPair) {
  const auto table = toy_vectors();
  const auto ds = parse_pairs("a\tb\t1\na\tzz\t3\nc\td\t2\nzz\tb\t4\nb\td\t0\n");
  const auto rep = evaluate_pairs(table_embed_fn(table), ds);
  EXPECT_EQ(rep.pairs_total, 5u);
  EXPECT_EQ(rep.pairs_used, 3u);
  EXPECT_EQ(rep.missing_words, 1u);
  EXPECT_EQ(rep.missing_word_list, std::vector<std::string>{"zz"});
  EXPECT_FALSE(rep.pairs[1].similarity.has_value());
  const auto j = rep.to_json(true);
  EXPECT_EQ(j.at("missing_words"), 1);
  EXPECT_EQ(j.at("pairs").size(), 5u);
  EXPECT_TRUE(j.at("pairs")[1].at("similarity").is_null());
  std::ostringstream tsv;
  rep.write_pair_tsv(tsv);
  EXPECT_NE(tsv.str().find("a\tzz\t3\t\n"), std::string::npos);
}

TEST(EvaluatePairs, AllMissingThrows) {
  const auto table = toy_vectors();
  EXPECT_THROW(evaluate_pairs(table_embed_fn(table), parse_pairs("x\ty\t1\n")), std::runtime_error);
}

TEST(EvaluatePairs, ScaleInvariant) {
  Rng rng(4);
  EmbeddingTable t1(5), t2(5);
  std::vector<std::string> words;
  for (int i = 0; i < 30; ++i) {
    std::vector<double> v(5);
    for (auto& x : v) x = rng.uniform(-1, 1);
    const std::string w = "w" + std::to_string(i);
    words.push_back(w);
    t1.add(w, v);
    for (auto& x : v) x *= 7.25;
    t2.add(w, v);
  }
  PairDataset ds;
  // Distinct words per pair, so no cosine sits at exactly 1.
  for (int k = 0; k < 29; ++k) ds.pairs.push_back({words[k], words[k + 1], rng.uniform(0, 10)});
  const auto a = evaluate_pairs(table_embed_fn(t1), ds);
  const auto b = evaluate_pairs(table_embed_fn(t2), ds);
  EXPECT_NEAR(a.spearman, b.spearman, 1e-12);
}

TEST(LoadPairs, Format) {
  const auto ds = parse_pairs("car insurance\tfirm_contract\t7.5\r\n\nbox\tcar\t1e1\n");
  ASSERT_EQ(ds.pairs.size(), 2u);
  EXPECT_EQ(ds.pairs[0].word1, "car insurance");
  EXPECT_DOUBLE_EQ(ds.pairs[1].gold, 10.0);
  EXPECT_EQ(ds.unique_words(), (std::set<std::string>{"box", "car", "contract", "firm", "insurance"}));
  EXPECT_THROW(parse_pairs("a\tb\n"), ParseError);
  EXPECT_THROW(parse_pairs("a\tb\t1\nc\td\tx\n"), ParseError);
}

namespace {

AnnotationSet parse_annotations(const std::string& text) {
  std::istringstream in(text);
  return load_annotations(in);
}

}  // namespace

TEST(Annotation, Loading) {
  const auto a = parse_annotations("id\tw1\tw2\ta1\ta2\ta3\np1\tx\ty\t4\t1\t1\n");
  EXPECT_EQ(a.items.size(), 1u);
  EXPECT_EQ(a.annotators(), 3u);
  EXPECT_THROW(parse_annotations("p1\tx\ty\t5\t1\n"), ParseError);
  EXPECT_THROW(parse_annotations("p1\tx\ty\t2\t1\np2\tx\ty\t1.5\t1\n"), ParseError);
  EXPECT_THROW(parse_annotations("p1\tx\ty\t2\n"), ParseError);
  EXPECT_THROW(parse_annotations("p1\tx\ty\t2\t1\np2\tx\ty\t2\t1\t0\n"), ParseError);
}

TEST(Annotation, AgreementExamples) {
  auto rep = annotator_agreement(parse_annotations("a\tx\ty\t1\t1\nb\tx\ty\t3\t3\nc\tx\ty\t4\t4\n"));
  EXPECT_NEAR(*rep.matrix[0][1], 1.0, 1e-15);
  EXPECT_NEAR(*rep.average, 1.0, 1e-15);
  rep = annotator_agreement(parse_annotations("a\tx\ty\t0\t4\nb\tx\ty\t2\t2\nc\tx\ty\t4\t0\n"));
  EXPECT_NEAR(*rep.average, -1.0, 1e-15);
  rep = annotator_agreement(parse_annotations("a\tx\ty\t2\t1\t0\nb\tx\ty\t2\t3\t1\n"));
  EXPECT_FALSE(rep.matrix[0][1].has_value());
  EXPECT_EQ(rep.undefined.size(), 2u);
  EXPECT_NEAR(*rep.average, 1.0, 1e-15);
  EXPECT_THROW(annotator_agreement(AnnotationSet{}), std::invalid_argument);
}

TEST(Annotation, AgreementMatchesOracle) {
  const auto a = parse_annotations(
      "p1\tx\ty\t4\t3\t4\n"
      "p2\tx\ty\t1\t0\t2\n"
      "p3\tx\ty\t3\t3\t1\n"
      "p4\tx\ty\t0\t1\t0\n"
      "p5\tx\ty\t2\t4\t3\n");
  const auto rep = annotator_agreement(a);
  double sum = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      const double want = *oracle_pearson(a.column(i), a.column(j));
      EXPECT_NEAR(*rep.matrix[i][j], want, 1e-12);
      EXPECT_NEAR(*rep.matrix[j][i], want, 1e-12);
      sum += want;
    }
  }
  EXPECT_NEAR(*rep.average, sum / 3, 1e-12);
  EXPECT_TRUE(rep.to_json().at("pearson").is_array());
}

TEST(Annotation, DeviationFlags) {
  const auto a = parse_annotations("p1\tx\ty\t4\t1\t1\np2\tx\ty\t2\t1\t2\np3\tx\ty\t3\t1\t0\n");
  const auto flags = flag_deviations(a, 1.0);
  ASSERT_EQ(flags.size(), 3u);
  EXPECT_EQ(flags[0], (std::vector<std::string>{"p1", "p3"}));
  // p1: the two 1s each sit 1.5 below the mean of the others (2.5).
  EXPECT_EQ(flags[1], std::vector<std::string>{"p1"});
  EXPECT_EQ(flags[2], (std::vector<std::string>{"p1", "p3"}));
  const auto none = flag_deviations(parse_annotations("p2\tx\ty\t2\t1\t2\n"), 1.0);
  for (const auto& f : none) EXPECT_TRUE(f.empty());
  EXPECT_THROW(flag_deviations(parse_annotations("p1\tx\ty\t4\t1\n")), std::invalid_argument);
}

TEST(Annotation, Aggregate) {
  const auto agg = aggregate_final_scores(parse_annotations("a\tx\ty\t1\t2\t3\nb\tx\ty\t0\t0\t0\nc\tx\ty\t4\t4\t3\n"));
  EXPECT_DOUBLE_EQ(agg.at("a"), 2.0);
  EXPECT_DOUBLE_EQ(agg.at("b"), 0.0);
  EXPECT_DOUBLE_EQ(agg.at("c"), 11.0 / 3.0);
}
