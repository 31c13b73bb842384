// Copyright 2026 The MRGNN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "fixtures.hpp"
#include "mrgnn/error.hpp"
#include "mrgnn/evaluation.hpp"
#include "mrgnn/metrics.hpp"
#include "oracles.hpp"

using namespace mrgnn;

namespace {

std::vector<int> labels_of(std::initializer_list<int> l) { return l; }

CommunityPartition two_clique_partition() {
  CommunityPartition p;
  p.assignment = {0, 0, 0, 0, 1, 1, 1, 1};
  return p;
}

/// Scorer that knows the true edges of every layer.
PairScorer oracle_scorer(const MultiplexGraph& g) {
  return [&g](std::size_t layer, Node i, Node j) { return g.layer(layer).has_edge(i, j) ? 0.9 : 0.1; };
}

PairScorer random_scorer(std::uint64_t seed) {
  return [seed](std::size_t layer, Node i, Node j) {
    return static_cast<double>(derive_seed(seed, layer * 100003 + i, j) % 1000003) / 1000003.0;
  };
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("auc examples") {
  CHECK(auc(std::vector<double>{0.9, 0.8, 0.3, 0.2}, labels_of({1, 1, 0, 0})) == 1.0);
  CHECK(auc(std::vector<double>{0.9, 0.6, 0.4, 0.2}, labels_of({1, 0, 1, 0})) == 0.75);
  CHECK(auc(std::vector<double>{0.3, 0.3, 0.3, 0.3}, labels_of({1, 0, 1, 0})) == 0.5);
  CHECK(auc(std::vector<double>{0.1, 0.9}, labels_of({1, 0})) == 0.0);
}

TEST_CASE("auc preconditions") {
  CHECK_THROWS_AS(auc(std::vector<double>{0.1, 0.2}, labels_of({1, 1})), DataError);
  CHECK_THROWS_AS(auc(std::vector<double>{0.1, 0.2}, labels_of({0, 0})), DataError);
  CHECK_THROWS_AS(auc(std::vector<double>{0.1, 0.2, 0.3}, labels_of({0, 1})), DataError);
  CHECK_THROWS_AS(auc(std::vector<double>{0.1, 0.2}, labels_of({0, 2})), DataError);
}

TEST_CASE("auc matches brute-force concordance on random instances") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 50)(rng);
    // Coarse scores on a third of the instances force many ties.
    const bool coarse = instance % 3 == 0;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = coarse ? static_cast<double>(rng() % 4) : std::uniform_real_distribution<double>(-3, 3)(rng);
      y[i] = static_cast<int>(rng() % 2);
    }
    y[0] = 1;
    y[1] = 0;
    std::shuffle(y.begin(), y.end(), rng);
    worst = std::max(worst, std::abs(auc(s, y) - oracle::concordance_auc(s, y)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("micro-F1 examples and accuracy equivalence") {
  CHECK(micro_f1(std::vector<double>{0.9, 0.8, 0.1, 0.2}, labels_of({1, 1, 0, 0})) == 1.0);
  CHECK(micro_f1(std::vector<double>{0.9, 0.8, 0.7, 0.6}, labels_of({1, 1, 0, 0})) == 0.5);
  CHECK(micro_f1(std::vector<double>{0.1, 0.2, 0.9, 0.8}, labels_of({1, 1, 0, 0})) == 0.0);
  CHECK(micro_f1(std::vector<double>{0.5, 0.49}, labels_of({1, 0})) == 1.0);
  CHECK(micro_f1(std::vector<double>{0.7, 0.2}, labels_of({1, 0}), 0.8) == 0.5);
  CHECK_THROWS_AS(micro_f1(std::vector<double>{}, std::vector<int>{}), DataError);

  std::mt19937_64 rng(5);
  for (int instance = 0; instance < 50; ++instance) {
    std::vector<double> s(30);
    std::vector<int> y(30);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < 30; ++i) {
      s[i] = std::uniform_real_distribution<double>(0, 1)(rng);
      y[i] = static_cast<int>(rng() % 2);
      correct += ((s[i] >= 0.5) == (y[i] == 1)) ? 1 : 0;
    }
    CHECK(micro_f1(s, y) == doctest::Approx(static_cast<double>(correct) / 30.0).epsilon(1e-15));
  }
}

}  // TEST_SUITE

TEST_SUITE("evaluation") {

TEST_CASE("weak test set draws cross-community test negatives") {
  const LayerGraph layer = fixtures::layer_from(8, fixtures::two_cliques_pairs());
  LayerSplit ls;
  ls.test_pos = {{3, 4}, {0, 1}};
  ls.test_neg = {{0, 2}, {1, 5}, {2, 6}};
  const WeakTestSet w = weak_test_set(layer, ls, two_clique_partition(), 1);
  CHECK(w.positives == EdgeList{{3, 4}});
  CHECK(w.strong_pos == 1);
  REQUIRE(w.negatives.size() == 1);
  CHECK((w.negatives.front() == Edge{1, 5} || w.negatives.front() == Edge{2, 6}));
  std::unordered_set<Edge, EdgeHash> drawn;
  for (std::uint64_t seed = 0; seed < 40; ++seed) drawn.insert(weak_test_set(layer, ls, two_clique_partition(), seed).negatives.front());
  CHECK(drawn.size() == 2);
}

TEST_CASE("weak test set tops up with fresh cross-community non-edges") {
  const LayerGraph layer = fixtures::layer_from(8, fixtures::two_cliques_pairs());
  LayerSplit ls;
  ls.test_pos = {{3, 4}};
  ls.test_neg = {{0, 5}};
  ls.train_neg = {{1, 6}, {0, 6}};
  ls.val_neg = {{2, 7}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    LayerSplit two = ls;
    two.test_pos.push_back({0, 1});
    two.test_pos.push_back({2, 3});
    CommunityPartition p = two_clique_partition();
    p.assignment = {0, 0, 1, 1, 2, 2, 2, 2};
    const WeakTestSet w = weak_test_set(layer, two, p, seed);
    REQUIRE(w.positives.size() == 1);
    REQUIRE(w.negatives.size() == 1);
    CHECK(w.negatives.front() == Edge{0, 5});

    // Two weak positives, one cross-community test negative: one fresh pair.
    LayerSplit more = ls;
    more.test_pos.push_back({0, 2});
    const WeakTestSet f = weak_test_set(layer, more, p, seed);
    REQUIRE(f.negatives.size() == 2);
    const Edge fresh = f.negatives.back();
    CHECK_FALSE(layer.has_edge(fresh.u, fresh.v));
    CHECK_FALSE(p.same_community(fresh.u, fresh.v));
    for (const EdgeList* l : {&ls.train_neg, &ls.val_neg, &ls.test_neg}) {
      CHECK(std::find(l->begin(), l->end(), fresh) == l->end());
    }
  }
}

TEST_CASE("perfect and random scorers") {
  const MultiplexGraph g = fixtures::toy_multiplex(60, 2, 7, 0.1, 6);
  const DataSplit split = split_edges(g, 0.3, 0.1, 7);
  const auto parts = partition_layers(g, 7);
  const EvaluationReport perfect = evaluate(oracle_scorer(g), g, split, parts);
  CHECK(perfect.macro_auc == 1.0);
  CHECK(perfect.macro_micro_f1 == 1.0);
  REQUIRE(perfect.macro_weak_auc.has_value());
  CHECK(*perfect.macro_weak_auc == 1.0);
  CHECK(perfect.seeds == std::vector<std::uint64_t>{7});
  for (const LayerMetrics& m : perfect.layers) {
    CHECK(m.test_pos == split.layers[m.layer].test_pos.size());
    CHECK(m.test_neg == split.layers[m.layer].test_neg.size());
    CHECK(m.weak_pos + m.strong_pos == m.test_pos);
    CHECK(m.weak_neg == m.weak_pos);
  }

  double mean = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) mean += evaluate(random_scorer(s), g, split, parts).macro_auc;
  CHECK(std::abs(mean / 20.0 - 0.5) < 0.05);
}

TEST_CASE("evaluation is invariant to the order of test pairs") {
  const MultiplexGraph g = fixtures::toy_multiplex(40, 3, 3, 0.15, 6);
  const DataSplit split = split_edges(g, 0.3, 0.1, 3);
  const auto parts = partition_layers(g, 3);
  DataSplit shuffled = split;
  std::mt19937_64 rng(1);
  for (LayerSplit& ls : shuffled.layers) {
    std::shuffle(ls.test_pos.begin(), ls.test_pos.end(), rng);
    std::shuffle(ls.test_neg.begin(), ls.test_neg.end(), rng);
  }
  const EvaluationReport a = evaluate(random_scorer(4), g, split, parts);
  const EvaluationReport b = evaluate(random_scorer(4), g, shuffled, parts);
  CHECK(a.macro_auc == b.macro_auc);
  CHECK(a.macro_micro_f1 == b.macro_micro_f1);
  CHECK(a.macro_weak_auc == b.macro_weak_auc);
  CHECK(a.to_csv().str() == b.to_csv().str());
}

TEST_CASE("layers without weak test edges report weak metrics as absent") {
  std::vector<LayerGraph> layers{fixtures::layer_from(8, fixtures::two_cliques_pairs(), 0),
                                 fixtures::layer_from(8, fixtures::two_cliques_pairs(), 1)};
  const MultiplexGraph g(8, layers);
  DataSplit split;
  split.layers.resize(2);
  split.layers[0].test_pos = {{3, 4}, {0, 1}};
  split.layers[0].test_neg = {{0, 5}, {1, 6}};
  split.layers[1].test_pos = {{0, 1}, {5, 6}};
  split.layers[1].test_neg = {{0, 5}, {1, 6}};
  const std::vector<CommunityPartition> parts{two_clique_partition(), two_clique_partition()};
  const EvaluationReport r = evaluate(oracle_scorer(g), g, split, parts);
  CHECK(r.layers[0].weak_auc.has_value());
  CHECK_FALSE(r.layers[1].weak_auc.has_value());
  CHECK_FALSE(r.layers[1].weak_micro_f1.has_value());
  CHECK(r.layers[1].strong_pos == 2);
  REQUIRE(r.macro_weak_auc.has_value());
  CHECK(*r.macro_weak_auc == *r.layers[0].weak_auc);

  const CsvTable t = r.to_csv();
  CHECK(t.header().front() == "variant");
  REQUIRE(t.num_rows() == 3);
  CHECK(t.rows()[1][5].empty());
  CHECK(t.rows()[2][2] == "macro");

  split.layers[1].test_pos.clear();
  CHECK_THROWS_AS(evaluate(oracle_scorer(g), g, split, parts), DataError);
  split.layers[1].test_pos = {{0, 1}};
  CHECK_THROWS_AS(evaluate(oracle_scorer(g), g, split, {parts[0]}), DataError);
}

TEST_CASE("seed summaries use population statistics and skip absent values") {
  EvaluationReport a, b, c;
  a.variant = "logit";
  a.macro_auc = 0.8;
  b.macro_auc = 0.9;
  c.macro_auc = 1.0;
  a.macro_weak_auc = 0.6;
  c.macro_weak_auc = 0.8;
  const SeedSummary s = summarize({a, b, c});
  CHECK(s.variant == "logit");
  CHECK(s.auc.count == 3);
  CHECK(s.auc.mean == doctest::Approx(0.9));
  CHECK(s.auc.std == doctest::Approx(std::sqrt(0.02 / 3.0)));
  CHECK(s.weak_auc.count == 2);
  CHECK(s.weak_auc.mean == doctest::Approx(0.7));
  CHECK(s.weak_auc.std == doctest::Approx(0.1));
  CHECK(summarize({}).auc.count == 0);
}

TEST_CASE("attention statistics") {
  AttentionTensor two(5, 2);
  for (Node n = 0; n < 5; ++n) {
    two(n, 0, 1) = 1.0;
    two(n, 1, 0) = 1.0;
  }
  const AttentionStats s2 = attention_stats(two);
  CHECK(s2.pairs.size() == 2);
  CHECK(s2.mean(0, 1) == 1.0);
  CHECK(s2.mean(1, 0) == 1.0);
  CHECK(s2.pairs[0].std == 0.0);
  CHECK(s2.pairs[0].histogram[19] == 5);
  CHECK(s2.max_asymmetry() == 0.0);
  CHECK_THROWS_AS(s2.mean(0, 0), std::out_of_range);

  AttentionTensor three(4, 3);
  std::mt19937_64 rng(3);
  for (Node n = 0; n < 4; ++n) {
    for (std::size_t p = 0; p < 3; ++p) {
      const double x = std::uniform_real_distribution<double>(0, 1)(rng);
      std::size_t first = p == 0 ? 1 : 0, second = p == 2 ? 1 : 2;
      three(n, p, first) = x;
      three(n, p, second) = 1.0 - x;
    }
  }
  const AttentionStats s3 = attention_stats(three);
  CHECK(s3.pairs.size() == 6);
  for (std::size_t p = 0; p < 3; ++p) {
    double sum = 0.0;
    for (std::size_t q = 0; q < 3; ++q) {
      if (q != p) sum += s3.mean(p, q);
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  for (const PairAttentionStats& ps : s3.pairs) {
    std::size_t total = 0;
    for (std::size_t c : ps.histogram) total += c;
    CHECK(total == 4);
    CHECK(ps.mean >= 0.0);
    CHECK(ps.mean <= 1.0);
  }
  CHECK(max_normalization_error(three) < 1e-15);
  three(0, 0, 1) += 0.25;
  CHECK(max_normalization_error(three) == doctest::Approx(0.25));

  double expect = 0.0;
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t q = p + 1; q < 3; ++q) expect = std::max(expect, std::abs(s3.mean(p, q) - s3.mean(q, p)));
  }
  CHECK(s3.max_asymmetry() == expect);
  const CsvTable t = s3.to_csv();
  CHECK(t.header().size() == 24);
  CHECK(t.header()[4] == "bin_00");
  CHECK(t.header()[23] == "bin_19");
}

TEST_CASE("attention from a model is normalized") {
  const MultiplexGraph g = fixtures::toy_multiplex(12, 3, 2);
  const ModelInput in = make_model_input(g, split_edges(g, 0.1, 0.1, 2));
  ModelConfig c;
  c.embed_dim = 8;
  c.aggregator = Aggregator::semantic;
  MrgnnParams p = MrgnnParams::init(c, 3, in.feature_width());
  const AttentionStats s = attention_stats(p, in);
  for (std::size_t a = 0; a < 3; ++a) {
    double sum = 0.0;
    for (std::size_t b = 0; b < 3; ++b) {
      if (a != b) sum += s.mean(a, b);
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  CHECK(max_normalization_error(embed(p, in).attention) < 1e-12);
}

TEST_CASE("mean-attention predictor arithmetic") {
  ModelConfig c;
  c.embed_dim = 1;
  MrgnnParams params = MrgnnParams::init(c, 2, 4);
  for (std::size_t r = 0; r < 2; ++r) params.store().value(params.mu(r)) = DenseMatrix::Ones(1, 1);
  auto intra_for = [](double prob) {
    DenseMatrix z(2, 1);
    z << std::log(prob / (1.0 - prob)), 1.0;
    return z;
  };
  AttentionTensor ones(2, 2);
  for (Node n = 0; n < 2; ++n) {
    ones(n, 0, 1) = 1.0;
    ones(n, 1, 0) = 1.0;
  }
  const AttentionStats stats = attention_stats(ones);
  const std::vector<DenseMatrix> p04{intra_for(0.4), intra_for(0.4)};
  CHECK(mean_attention_predict(params, p04, stats, 0, 1, 0) == doctest::Approx(0.8).epsilon(1e-14));
  const std::vector<DenseMatrix> p07{intra_for(0.7), intra_for(0.7)};
  CHECK(mean_attention_predict(params, p07, stats, 0, 1, 1) == 1.0);
  CHECK(mean_attention_predict(params, p07, stats, 0, 1, 1, false) == doctest::Approx(1.4).epsilon(1e-14));

  DenseMatrix off(2, 1);
  off << -60.0, 1.0;
  const std::vector<DenseMatrix> intra_only{intra_for(0.3), off};
  CHECK(mean_attention_predict(params, intra_only, stats, 0, 1, 0) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("holdout runs follow the seed order and match sequential runs") {
  const MultiplexGraph g = fixtures::toy_multiplex(12, 3, 9);
  const auto parts = partition_layers(g, 9);
  ModelVariant v{"semantic", {}};
  v.config.embed_dim = 4;
  v.config.aggregator = Aggregator::semantic;
  TrainConfig tc;
  tc.max_epochs = 5;
  const std::vector<std::uint64_t> seeds{4, 1, 7};
  const auto runs = run_holdout_seeds(g, v, tc, seeds, 0.1, 0.1, parts);
  REQUIRE(runs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(runs[i].seed == seeds[i]);
    CHECK(runs[i].report.variant == "semantic");
    const HoldoutRun one = run_holdout(g, v, tc, seeds[i], 0.1, 0.1, parts);
    CHECK(one.report.macro_auc == runs[i].report.macro_auc);
    CHECK(one.report.to_csv().str() == runs[i].report.to_csv().str());
  }
  CHECK_THROWS_AS(run_holdout_seeds(g, v, tc, {}, 0.1, 0.1, parts), DataError);
}

TEST_CASE("sweep grids") {
  const MultiplexGraph g = fixtures::toy_multiplex(12, 3, 10);
  const auto parts = partition_layers(g, 10);
  ModelVariant logit{"logit", {}}, semantic{"semantic", {}};
  logit.config.embed_dim = semantic.config.embed_dim = 4;
  semantic.config.aggregator = Aggregator::semantic;
  TrainConfig tc;
  tc.max_epochs = 3;

  const auto rows = sweep_training_size(g, {0.3, 0.6}, {logit, semantic}, tc, {0, 1}, parts);
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].variant == "logit");
  CHECK(rows[0].fraction == 0.3);
  CHECK(rows[1].seed == 1);
  CHECK(rows[2].fraction == 0.6);
  CHECK(rows[4].variant == "semantic");
  for (const SweepRow& r : rows) {
    CHECK(r.auc >= 0.0);
    CHECK(r.auc <= 1.0);
  }
  const auto again = sweep_training_size(g, {0.3, 0.6}, {logit, semantic}, tc, {0, 1}, parts);
  CHECK(sweep_csv(rows).str() == sweep_csv(again).str());
  CHECK_THROWS_AS(sweep_training_size(g, {0.0}, {logit}, tc, {0}, parts), DataError);
  CHECK_THROWS_AS(sweep_training_size(g, {0.5}, {}, tc, {0}, parts), DataError);

  const auto dims = sweep_embedding_dim(g, {4, 1, 2}, logit, tc, {3, 5}, 0.1, 0.1, parts);
  REQUIRE(dims.size() == 6);
  CHECK(dims[0].embed_dim == 1);
  CHECK(dims[0].seed == 3);
  CHECK(dims[1].seed == 5);
  CHECK(dims[5].embed_dim == 4);
  const auto dims_again = sweep_embedding_dim(g, {4, 1, 2}, logit, tc, {3, 5}, 0.1, 0.1, parts);
  CHECK(sweep_csv(dims).str() == sweep_csv(dims_again).str());
  CHECK(sweep_csv(dims).header().size() == 8);
  CHECK_THROWS_AS(sweep_embedding_dim(g, {0}, logit, tc, {0}, 0.1, 0.1, parts), DataError);
}

}  // TEST_SUITE
