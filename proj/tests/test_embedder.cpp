// Copyright 2026 The sylemb Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "sylemb/corpus/training_set.hpp"
#include "sylemb/embedder/embed.hpp"
#include "sylemb/embedder/serialize.hpp"
#include "sylemb/embedder/train.hpp"
#include "sylemb/evaluation/pairs.hpp"

using namespace sylemb;
using sylemb::testing::embedder_gradcheck;
using sylemb::testing::make_synthetic;
using sylemb::testing::random_model;

namespace {

EmbedderModel two_syllable_model(std::vector<double> s1, std::vector<double> s2) {
  EmbedderModel m(ComposerKind::vanilla, 2, 2, SyllableVocab({"a", "b"}), {});
  m.table.value = nn::Tensor({2, 2}, {s1[0], s1[1], s2[0], s2[1]});
  return m;
}

// Straight-line evaluation of the attention composition, written without
// any of the library's helpers.
std::vector<double> attention_oracle(const EmbedderModel& m, const std::vector<int>& ids) {
  const std::size_t D = m.dim, O = m.out_dim, n = ids.size();
  std::vector<std::vector<double>> s(n, std::vector<double>(D));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < D; ++a) s[i][a] = m.table.value.data()[ids[i] * D + a];
  std::vector<double> c(D, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < D; ++a) c[a] += s[i][a] / n;
  std::vector<double> q(D, 0.0);
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b) q[a] += m.w_q.value.data()[a * D + b] * c[b];
  std::vector<double> z(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < D; ++a) {
      double k = m.b_k.value.data()[a];
      for (std::size_t b = 0; b < D; ++b) k += m.w_k.value.data()[a * D + b] * s[i][b];
      z[i] += q[a] * k;
    }
    z[i] /= std::sqrt(static_cast<double>(D));
  }
  double zsum = 0.0;
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) zsum += (e[i] = std::exp(z[i]));
  std::vector<double> p(D, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < D; ++a) p[a] += e[i] / zsum * s[i][a];
  std::vector<double> out = p;
  if (m.kind == ComposerKind::attention2) {
    out.assign(m.b_e.value.data().begin(), m.b_e.value.data().end());
    for (std::size_t o = 0; o < O; ++o)
      for (std::size_t a = 0; a < D; ++a) out[o] += m.w_e.value.data()[a * O + o] * p[a];
  }
  double norm = 0.0;
  for (double x : out) norm += x * x;
  for (auto& x : out) x /= std::sqrt(norm);
  return out;
}

std::vector<int> random_ids(Rng& rng, std::size_t vocab, std::size_t max_len) {
  std::vector<int> ids(1 + rng.below(max_len));
  for (auto& id : ids) id = static_cast<int>(rng.below(vocab));
  return ids;
}

}  // namespace

TEST(ComposeVanilla, Examples) {
  const auto m = two_syllable_model({1, 0}, {0, 1});
  const std::vector<int> both{0, 1};
  const auto v = compose_vanilla(m, both);
  EXPECT_NEAR(v[0], std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_NEAR(v[1], std::sqrt(2.0) / 2.0, 1e-15);

  const auto m2 = two_syllable_model({3, 4}, {0, 1});
  const std::vector<int> one{0};
  EXPECT_EQ(compose_vanilla(m2, one), (std::vector<double>{0.6, 0.8}));

  const auto m3 = two_syllable_model({1, 0}, {-1, 0});
  EXPECT_THROW(compose_vanilla(m3, both), ZeroNormError);
  EXPECT_THROW(compose_vanilla(m3, std::vector<int>{}), std::invalid_argument);
  EXPECT_THROW(compose_vanilla(m3, std::vector<int>{2}), std::out_of_range);
}

TEST(ComposeVanilla, UnitNorm) {
  Rng rng(1);
  auto m = random_model(ComposerKind::vanilla, 20, 8, 8, rng);
  for (int t = 0; t < 1000; ++t) {
    const auto ids = random_ids(rng, 20, 6);
    EXPECT_NEAR(nn::l2_norm(compose_vanilla(m, ids)), 1.0, 1e-12);
  }
}

TEST(ComposeAttention, UniformDegeneracy) {
  Rng rng(2);
  for (auto kind : {ComposerKind::attention1, ComposerKind::attention2}) {
    auto m = random_model(kind, 15, 6, kind == ComposerKind::attention2 ? 9 : 6, rng);
    m.w_q.value.fill(0.0);
    for (int t = 0; t < 300; ++t) {
      const auto ids = random_ids(rng, 15, 6);
      const auto tr = trace_attention(m, ids, false);
      const auto ref = compose_vanilla(m, ids);
      for (std::size_t a = 0; a < ref.size(); ++a) ASSERT_NEAR(tr.output[a], ref[a], 1e-9);
      for (double w : tr.weights) EXPECT_NEAR(w, 1.0 / ids.size(), 1e-15);
    }
  }
}

TEST(ComposeAttention, SingleSyllableIsNormalizedRow) {
  Rng rng(3);
  const auto m = random_model(ComposerKind::attention1, 5, 4, 4, rng);
  const std::vector<int> ids{3};
  const auto v = compose_attention(m, ids);
  const auto ref = nn::l2_normalize(m.syllable(3));
  for (std::size_t a = 0; a < 4; ++a) EXPECT_NEAR(v[a], ref[a], 1e-15);
}

TEST(ComposeAttention, MatchesStraightLineOracle) {
  Rng rng(4);
  for (auto kind : {ComposerKind::attention1, ComposerKind::attention2}) {
    const auto m = random_model(kind, 10, 5, kind == ComposerKind::attention2 ? 7 : 5, rng, 1.5);
    for (int t = 0; t < 50; ++t) {
      std::vector<int> ids(3);
      for (auto& id : ids) id = static_cast<int>(rng.below(10));
      const auto got = compose_attention(m, ids);
      const auto want = attention_oracle(m, ids);
      for (std::size_t a = 0; a < want.size(); ++a) EXPECT_NEAR(got[a], want[a], 1e-12);
    }
  }
}

TEST(ComposeAttention, WeightsAreDistributionAndPooledInHull) {
  Rng rng(5);
  const auto m = random_model(ComposerKind::attention1, 12, 4, 4, rng, 2.0);
  for (int t = 0; t < 200; ++t) {
    const auto ids = random_ids(rng, 12, 5);
    const auto tr = trace_attention(m, ids);
    double sum = 0.0;
    for (double w : tr.weights) {
      EXPECT_GE(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (std::size_t a = 0; a < 4; ++a) {
      double lo = 1e300, hi = -1e300;
      for (int id : ids) {
        lo = std::min(lo, m.syllable(id)[a]);
        hi = std::max(hi, m.syllable(id)[a]);
      }
      EXPECT_GE(tr.pooled[a], lo - 1e-12);
      EXPECT_LE(tr.pooled[a], hi + 1e-12);
    }
  }
}

TEST(ParamCount, ReferenceConfigurations) {
  EXPECT_EQ(param_count(ComposerKind::vanilla, 16032, 300, 300), 4'809'600);
  EXPECT_EQ(param_count(ComposerKind::attention1, 16032, 300, 300), 4'989'900);
  EXPECT_EQ(param_count(ComposerKind::attention2, 16032, 200, 300), 3'346'900);
  EXPECT_EQ(param_count(ComposerKind::vanilla, 9814, 300, 300), 2'944'200);
  EXPECT_EQ(param_count(ComposerKind::attention1, 9814, 300, 300), 3'124'500);
  EXPECT_EQ(param_count(ComposerKind::attention2, 9814, 200, 300), 2'103'300);
}

TEST(ParamCount, MatchesModelStorage) {
  Rng rng(6);
  for (auto kind : {ComposerKind::vanilla, ComposerKind::attention1, ComposerKind::attention2}) {
    const auto m = random_model(kind, 13, 4, kind == ComposerKind::attention2 ? 6 : 4, rng);
    std::int64_t stored = 0;
    for (const auto* p : m.parameters()) stored += static_cast<std::int64_t>(p->size());
    EXPECT_EQ(stored, m.parameter_count());
  }
}

TEST(EmbedderConfig, Validation) {
  auto cfg = EmbedderConfig::for_kind(ComposerKind::attention2);
  EXPECT_EQ(cfg.dim, 200u);
  EXPECT_EQ(cfg.out_dim, 300u);
  EXPECT_NO_THROW(cfg.validate());
  cfg.dim = 300;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = EmbedderConfig::for_kind(ComposerKind::vanilla);
  cfg.epochs = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(parse_composer_kind("attention3"), ConfigError);
}

class EmbedderGradient : public ::testing::TestWithParam<ComposerKind> {};

TEST_P(EmbedderGradient, ThreeWordCorpus) {
  Rng rng(7);
  const auto kind = GetParam();
  const std::size_t D = 5, O = kind == ComposerKind::attention2 ? 7 : 5;
  auto m = random_model(kind, 8, D, O, rng);
  const std::vector<std::vector<int>> words{{0, 3, 5}, {2, 2}, {7, 1, 4, 6}};
  std::vector<std::vector<double>> targets;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::vector<double> t(O);
    for (auto& x : t) x = rng.uniform(-1, 1);
    targets.push_back(nn::l2_normalize(t));
  }
  const auto rep = embedder_gradcheck(m, words, targets);
  EXPECT_LT(rep.max_rel_error, 1e-6) << to_string(kind);
  EXPECT_LT(rep.max_abs_error_near_zero, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(AllKinds, EmbedderGradient,
                         ::testing::Values(ComposerKind::vanilla, ComposerKind::attention1, ComposerKind::attention2),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(TrainEmbedder, SyntheticRecovery) {
  const auto corpus = make_synthetic(300, 60, 16, 21);
  const auto ts = build_training_set(corpus.ds, corpus.emb);
  EmbedderConfig cfg = EmbedderConfig::for_kind(ComposerKind::vanilla, 16);
  cfg.seed = 3;
  const auto res = train_embedder(ts, cfg);
  ASSERT_FALSE(res.loss_history.empty());
  EXPECT_LT(res.loss_history.back(), 1e-3);
  EXPECT_LT(res.loss_history.back(), res.loss_history.front());
}

TEST(TrainEmbedder, AttentionLossDecreases) {
  const auto corpus = make_synthetic(200, 50, 12, 22);
  const auto ts = build_training_set(corpus.ds, corpus.emb);
  for (auto kind : {ComposerKind::attention1, ComposerKind::attention2}) {
    EmbedderConfig cfg = EmbedderConfig::for_kind(kind, 12);
    cfg.epochs = 10;
    const auto res = train_embedder(ts, cfg);
    EXPECT_LT(res.loss_history.back(), res.loss_history.front()) << to_string(kind);
  }
}

TEST(TrainEmbedder, MemorizesSingleWord) {
  const DecompositionDataset ds(std::vector<Decomposition>{{"box", {"box"}}});
  EmbeddingTable emb(4);
  emb.add("box", std::vector<double>{0.5, -0.5, 0.5, 0.5});
  const auto ts = build_training_set(ds, emb);
  auto cfg = EmbedderConfig::for_kind(ComposerKind::vanilla, 4);
  cfg.early_stop_tol = 0.0;
  cfg.epochs = 1000;
  const auto res = train_embedder(ts, cfg);
  const auto v = compose(res.model, ts.examples[0].ids);
  EXPECT_LT(nn::mse(v, ts.examples[0].target), 1e-6);
}

TEST(TrainEmbedder, BitwiseReproducible) {
  const auto corpus = make_synthetic(120, 30, 8, 23);
  const auto ts = build_training_set(corpus.ds, corpus.emb);
  auto cfg = EmbedderConfig::for_kind(ComposerKind::attention1, 8);
  cfg.epochs = 3;
  cfg.seed = 99;
  const auto a = train_embedder(ts, cfg);
  const auto b = train_embedder(ts, cfg);
  EXPECT_EQ(a.loss_history, b.loss_history);
  EXPECT_EQ(a.model.table.value.data(), b.model.table.value.data());
  EXPECT_EQ(a.model.w_q.value.data(), b.model.w_q.value.data());
  cfg.seed = 100;
  const auto c = train_embedder(ts, cfg);
  EXPECT_NE(a.model.table.value.data(), c.model.table.value.data());
}

TEST(TrainEmbedder, Errors) {
  const auto corpus = make_synthetic(10, 5, 4, 24);
  const auto ts = build_training_set(corpus.ds, corpus.emb);
  auto cfg = EmbedderConfig::for_kind(ComposerKind::vanilla, 6);
  EXPECT_THROW(train_embedder(ts, cfg), ShapeError);
  cfg = EmbedderConfig::for_kind(ComposerKind::vanilla, 4);
  auto poisoned = ts;
  poisoned.examples[0].target[0] = std::nan("");
  EXPECT_THROW(train_embedder(poisoned, cfg), TrainingDivergedError);
  EXPECT_THROW(train_embedder(TrainingSet{}, cfg), std::invalid_argument);
}

namespace {

// apple = ap-ple, car, insurance = in-sur-ance; rows chosen by hand.
EmbedderModel phrase_model() {
  EmbedderModel m(ComposerKind::vanilla, 3, 3, SyllableVocab({"ance", "ap", "car", "in", "ple", "sur"}), {});
  m.table.value = nn::Tensor({6, 3}, {0, 0, 1,   // ance
                                      1, 0, 0,   // ap
                                      0, 2, 0,   // car
                                      0, 0, 1,   // in
                                      0, 1, 0,   // ple
                                      1, 1, 0}); // sur
  return m;
}

}  // namespace

TEST(Embed, WordAndPhrase) {
  const auto m = phrase_model();
  const DecompositionDataset table(std::vector<Decomposition>{{"apple", {"ap", "ple"}}, {"car", {"car"}}, {"insurance", {"in", "sur", "ance"}}});
  const auto resolver = table_resolver(table);

  const auto apple = embed(m, "Apple", resolver);
  ASSERT_TRUE(apple.ok());
  const std::vector<int> ap_ple{1, 4};
  EXPECT_EQ(*apple.vector, compose(m, ap_ple));

  const auto phrase = embed(m, "car insurance", resolver);
  const auto phrase2 = embed(m, "car_insurance", resolver);
  ASSERT_TRUE(phrase.ok());
  auto car = compose(m, std::vector<int>{2});
  auto ins = compose(m, std::vector<int>{3, 5, 0});
  std::vector<double> sum(3);
  for (int a = 0; a < 3; ++a) sum[a] = car[a] + ins[a];
  const auto want = nn::l2_normalize(sum);
  for (int a = 0; a < 3; ++a) EXPECT_NEAR((*phrase.vector)[a], want[a], 1e-15);
  EXPECT_EQ(*phrase.vector, *phrase2.vector);
  EXPECT_NEAR(nn::l2_norm(*phrase.vector), 1.0, 1e-12);
}

TEST(Embed, MissingWords) {
  const auto m = phrase_model();
  const DecompositionDataset table(std::vector<Decomposition>{{"apple", {"ap", "ple"}}, {"box", {"box"}}});
  const auto resolver = table_resolver(table);
  const auto pear = embed(m, "pear", resolver);
  EXPECT_FALSE(pear.ok());
  EXPECT_EQ(pear.missing_words, std::vector<std::string>{"pear"});
  EXPECT_EQ(pear.words.at(0).reason, ResolveReason::not_in_table);

  const auto box = embed(m, "apple box box", resolver);
  EXPECT_FALSE(box.ok());
  EXPECT_EQ(box.missing_words, std::vector<std::string>{"box"});
  EXPECT_EQ(box.words.at(1).reason, ResolveReason::unknown_syllable);
}

TEST(Embed, ZeroNormIsMissing) {
  EmbedderModel m(ComposerKind::vanilla, 2, 2, SyllableVocab({"a", "b"}), {});
  m.table.value = nn::Tensor({2, 2}, {1, 0, -1, 0});
  const DecompositionDataset table(std::vector<Decomposition>{{"ab", {"a", "b"}}});
  const auto out = embed(m, "ab", table_resolver(table));
  EXPECT_FALSE(out.ok());
  EXPECT_EQ(out.words.at(0).reason, ResolveReason::zero_norm);
}

TEST(Embed, VariantsApplied) {
  EmbedderModel m(ComposerKind::vanilla, 2, 2, SyllableVocab({"$ap", "ple#"}), {});
  m.marking.start = {"ap"};
  m.marking.end = {"ple"};
  m.table.value = nn::Tensor({2, 2}, {1, 0, 0, 1});
  const DecompositionDataset table(std::vector<Decomposition>{{"apple", {"ap", "ple"}}});
  const auto out = embed(m, "apple", table_resolver(table));
  ASSERT_TRUE(out.ok());
  EXPECT_NEAR((*out.vector)[0], std::sqrt(0.5), 1e-15);
}

TEST(EmbedWithTable, JoinedPhraseFirst) {
  EmbeddingTable t(2);
  t.add("car", std::vector<double>{1, 0});
  t.add("insurance", std::vector<double>{0, 3});
  t.add("car_insurance", std::vector<double>{5, 5});
  auto out = embed_with_table(t, "Car Insurance");
  ASSERT_TRUE(out.ok());
  EXPECT_NEAR((*out.vector)[0], std::sqrt(0.5), 1e-15);
  EmbeddingTable t2(2);
  t2.add("car", std::vector<double>{2, 0});
  t2.add("insurance", std::vector<double>{0, 3});
  out = embed_with_table(t2, "car insurance");
  ASSERT_TRUE(out.ok());
  EXPECT_NEAR((*out.vector)[0], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR((*out.vector)[1], std::sqrt(0.5), 1e-15);
  EXPECT_FALSE(embed_with_table(t2, "car pear").ok());
}

TEST(EmbedderIo, RoundTripIsFloat32) {
  Rng rng(8);
  auto m = random_model(ComposerKind::attention2, 6, 3, 5, rng);
  m.marking.start = {"s100"};
  std::stringstream buf;
  save_embedder(buf, m);
  const auto back = load_embedder(buf);
  EXPECT_EQ(back.kind, m.kind);
  EXPECT_EQ(back.vocab.tokens(), m.vocab.tokens());
  EXPECT_EQ(back.marking.start, m.marking.start);
  const auto ps = m.parameters();
  const auto qs = back.parameters();
  ASSERT_EQ(ps.size(), qs.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t k = 0; k < ps[i]->size(); ++k) {
      EXPECT_EQ(qs[i]->value[k], static_cast<double>(static_cast<float>(ps[i]->value[k])));
    }
  }
  // Header, then 4 bytes per parameter.
  const auto bytes = buf.str().size();
  EXPECT_GT(bytes, 4u * static_cast<std::size_t>(m.parameter_count()));
}
