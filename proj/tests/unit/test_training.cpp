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
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "mrgnn/error.hpp"
#include "mrgnn/metrics.hpp"
#include "mrgnn/training.hpp"

using namespace mrgnn;

namespace {

ModelConfig toy_model(Aggregator agg = Aggregator::logit) {
  ModelConfig c;
  c.embed_dim = 8;
  c.aggregator = agg;
  c.init_seed = 3;
  return c;
}

struct Toy {
  MultiplexGraph graph;
  DataSplit split;
  ModelInput input;
};

Toy toy(std::uint64_t seed = 1) {
  Toy t{fixtures::toy_multiplex(12, 3, seed), {}, {}};
  t.split = split_edges(t.graph, 0.1, 0.1, seed);
  t.input = make_model_input(t.graph, t.split);
  return t;
}

double loss_on_constant(const DenseMatrix& z, const std::vector<LayerSplit>& layers) {
  ModelConfig c = toy_model();
  c.embed_dim = static_cast<std::size_t>(z.cols());
  // The model itself needs two layers; the objective only reads the scorers
  // of the layers present in the split.
  MrgnnParams p = MrgnnParams::init(c, std::max<std::size_t>(2, layers.size()), 4);
  for (std::size_t r = 0; r < layers.size(); ++r) p.store().value(p.mu(r)) = DenseMatrix::Ones(1, z.cols());
  DataSplit split;
  split.layers = layers;
  ad::Tape tape;
  std::vector<ad::Var> fused(layers.size(), tape.constant(z));
  return compute_loss(tape, p, fused, split).scalar();
}

bool same_values(const ParamStore& a, const ParamStore& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.name(i) != b.name(i) || a.value(i) != b.value(i)) return false;
  }
  return true;
}

double validation_macro_auc(MrgnnParams& params, const ModelInput& input, const DataSplit& split) {
  const EmbeddingSet e = embed(params, input);
  double sum = 0.0;
  for (std::size_t r = 0; r < split.layers.size(); ++r) {
    std::vector<double> s;
    std::vector<int> y;
    for (const Edge& p : split.layers[r].val_pos) {
      s.push_back(score_link(e.fused[r], params.store().value(params.mu(r)), p.u, p.v));
      y.push_back(1);
    }
    for (const Edge& p : split.layers[r].val_neg) {
      s.push_back(score_link(e.fused[r], params.store().value(params.mu(r)), p.u, p.v));
      y.push_back(0);
    }
    sum += auc(s, y);
  }
  return sum / static_cast<double>(split.layers.size());
}

}  // namespace

TEST_SUITE("training") {

TEST_CASE("loss closed forms") {
  const DenseMatrix zero = DenseMatrix::Zero(3, 2);
  LayerSplit one;
  one.train_pos = {{0, 1}};
  CHECK(loss_on_constant(zero, {one}) == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
  CHECK(loss_on_constant(zero, {one, one}) == doctest::Approx(2 * std::numbers::ln2).epsilon(1e-15));

  LayerSplit both;
  both.train_pos = {{0, 1}};
  both.train_neg = {{0, 2}};
  DenseMatrix sharp(3, 2);
  sharp << 10, 10, 10, 10, -10, -10;
  const double l = loss_on_constant(sharp, {both});
  CHECK(l >= 0.0);
  CHECK(l < 1e-12);

  // Saturated wrong predictions are clamped rather than infinite.
  LayerSplit wrong;
  wrong.train_neg = {{0, 1}};
  CHECK(loss_on_constant(sharp, {wrong}) == doctest::Approx(-std::log(1.0 - (1.0 - 1e-12))).epsilon(1e-14));

  CHECK_THROWS_AS(loss_on_constant(zero, {one, LayerSplit{}}), DataError);
}

TEST_CASE("config validation and batch resolution") {
  TrainConfig c;
  CHECK(c.learning_rate == 0.7);
  CHECK(c.patience == 20);
  c.validate();
  c.learning_rate = 0.0;
  CHECK_THROWS_AS(c.validate(), DataError);
  c = TrainConfig{};
  c.patience = 0;
  CHECK_THROWS_AS(c.validate(), DataError);
  c = TrainConfig{};
  CHECK(resolve_batch_size(c, 246) == 0);
  CHECK(resolve_batch_size(c, 2000) == 0);
  CHECK(resolve_batch_size(c, 2001) == 512);
  c.batch_size = 64;
  CHECK(resolve_batch_size(c, 10) == 64);

  Toy t = toy();
  TrainConfig bad;
  bad.learning_rate = -1.0;
  CHECK_THROWS_AS(train(t.input, t.split, toy_model(), bad), DataError);
  bad = TrainConfig{};
  bad.max_epochs = 0;
  CHECK_THROWS_AS(train(t.input, t.split, toy_model(), bad), DataError);
}

TEST_CASE("zero learning rate leaves the parameters at their initial values") {
  Toy t = toy();
  const MrgnnParams init = MrgnnParams::init(toy_model(), 3, t.input.feature_width());
  TrainConfig c;
  c.learning_rate = 0.0;
  c.max_epochs = 7;
  for (bool stop : {true, false}) {
    c.early_stopping = stop;
    const TrainResult r = train(t.input, t.split, toy_model(), c);
    CHECK(same_values(r.params.store(), init.store()));
    CHECK(r.report.final_loss == r.report.initial_loss);
    for (const EpochRecord& e : r.report.epochs) CHECK(e.loss == r.report.initial_loss);
  }
}

TEST_CASE("one small full-batch step does not increase the loss") {
  for (Aggregator agg : {Aggregator::logit, Aggregator::semantic}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      Toy t = toy(seed);
      MrgnnParams p = MrgnnParams::init(toy_model(agg), 3, t.input.feature_width());
      const double before = sgd_step(p, t.input, t.split, 1e-3);
      MrgnnParams fresh = MrgnnParams::init(toy_model(agg), 3, t.input.feature_width());
      CHECK(before == training_loss(fresh, t.input, t.split));
      CHECK(training_loss(p, t.input, t.split) <= before);
    }
  }
}

TEST_CASE("two hundred epochs reduce the training loss") {
  Toy t = toy();
  TrainConfig c;
  c.max_epochs = 200;
  c.early_stopping = false;
  for (Aggregator agg : {Aggregator::logit, Aggregator::semantic}) {
    const TrainResult r = train(t.input, t.split, toy_model(agg), c);
    CHECK(r.report.epochs_run == 200);
    CHECK(r.report.best_epoch == 201);
    CHECK_FALSE(r.report.stopped_early);
    CHECK(r.report.final_loss < r.report.initial_loss);
    CHECK(r.report.epochs.front().loss == r.report.initial_loss);
  }
}

TEST_CASE("training is deterministic") {
  Toy t = toy(4);
  TrainConfig c;
  c.max_epochs = 40;
  c.patience = 5;
  for (std::optional<std::size_t> batch : {std::optional<std::size_t>{}, std::optional<std::size_t>{16}}) {
    c.batch_size = batch;
    const TrainResult a = train(t.input, t.split, toy_model(Aggregator::semantic), c);
    const TrainResult b = train(t.input, t.split, toy_model(Aggregator::semantic), c);
    CHECK(same_values(a.params.store(), b.params.store()));
    CHECK(a.report.best_epoch == b.report.best_epoch);
    CHECK(a.report.epochs_run == b.report.epochs_run);
    CHECK(a.report.final_loss == b.report.final_loss);
    REQUIRE(a.report.epochs.size() == b.report.epochs.size());
    for (std::size_t i = 0; i < a.report.epochs.size(); ++i) {
      CHECK(a.report.epochs[i].loss == b.report.epochs[i].loss);
      CHECK(a.report.epochs[i].val_auc == b.report.epochs[i].val_auc);
    }
    CHECK(a.report.to_csv(3).str() == b.report.to_csv(3).str());
  }
}

TEST_CASE("mini-batch training mixes layers and still descends") {
  Toy t = toy(2);
  TrainConfig c;
  c.max_epochs = 100;
  c.batch_size = 16;
  c.early_stopping = false;
  const TrainResult r = train(t.input, t.split, toy_model(), c);
  CHECK(r.report.final_loss < r.report.initial_loss);
  c.seed = 9;
  const TrainResult other = train(t.input, t.split, toy_model(), c);
  CHECK_FALSE(same_values(r.params.store(), other.params.store()));
}

TEST_CASE("early stopping returns the best validation snapshot") {
  Toy t = toy(5);
  TrainConfig c;
  c.max_epochs = 300;
  c.patience = 15;
  const TrainResult r = train(t.input, t.split, toy_model(), c);
  REQUIRE(r.report.best_epoch >= 1);
  REQUIRE(r.report.best_epoch <= r.report.epochs_run);
  double best = -1.0;
  std::size_t arg = 0;
  for (const EpochRecord& e : r.report.epochs) {
    REQUIRE(e.val_auc_macro.has_value());
    CHECK(e.val_auc.size() == 3);
    if (*e.val_auc_macro > best) {
      best = *e.val_auc_macro;
      arg = e.epoch;
    }
  }
  CHECK(arg == r.report.best_epoch);
  if (r.report.stopped_early) CHECK(r.report.epochs_run == r.report.best_epoch + c.patience);
  MrgnnParams returned = r.params;
  CHECK(validation_macro_auc(returned, t.input, t.split) == doctest::Approx(best).epsilon(1e-15));
  CHECK(r.report.final_loss == training_loss(returned, t.input, t.split));
}

TEST_CASE("loss is invariant to the order of training pairs") {
  Toy t = toy(6);
  MrgnnParams p = MrgnnParams::init(toy_model(Aggregator::semantic), 3, t.input.feature_width());
  for (std::size_t r = 0; r < 3; ++r) p.store().value(p.mu(r)) *= 5.0;
  const double base = training_loss(p, t.input, t.split);
  DataSplit shuffled = t.split;
  std::mt19937_64 rng(12);
  for (LayerSplit& ls : shuffled.layers) {
    std::shuffle(ls.train_pos.begin(), ls.train_pos.end(), rng);
    std::shuffle(ls.train_neg.begin(), ls.train_neg.end(), rng);
  }
  CHECK(training_loss(p, t.input, shuffled) == doctest::Approx(base).epsilon(1e-13));
}

TEST_CASE("divergence aborts with a diagnostic") {
  Toy t = toy();
  TrainConfig c;
  c.learning_rate = 1e300;
  c.max_epochs = 5;
  c.early_stopping = false;
  CHECK_THROWS_WITH_AS(train(t.input, t.split, toy_model(), c), doctest::Contains("training diverged at epoch"),
                       NumericError);
}

TEST_CASE("report table layout") {
  Toy t = toy();
  TrainConfig c;
  c.max_epochs = 3;
  const TrainResult r = train(t.input, t.split, toy_model(), c);
  const std::string csv = r.report.to_csv(3).str();
  CHECK(csv.rfind("epoch,loss,val_auc_0,val_auc_1,val_auc_2,val_auc_macro\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

}  // TEST_SUITE
