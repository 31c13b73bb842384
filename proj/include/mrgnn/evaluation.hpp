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

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mrgnn/community.hpp"
#include "mrgnn/io.hpp"
#include "mrgnn/model.hpp"
#include "mrgnn/training.hpp"

namespace mrgnn {

/// Link score for the pair (i, j) of a layer. Higher means more likely.
using PairScorer = std::function<double(std::size_t layer, Node i, Node j)>;

struct LayerMetrics {
  std::size_t layer = 0;
  double auc = 0.0;
  double micro_f1 = 0.0;
  /// Absent when the layer has no weak test positives.
  std::optional<double> weak_auc;
  std::optional<double> weak_micro_f1;
  std::size_t test_pos = 0;
  std::size_t test_neg = 0;
  std::size_t weak_pos = 0;
  std::size_t strong_pos = 0;
  std::size_t weak_neg = 0;
};

struct EvaluationReport {
  std::vector<LayerMetrics> layers;
  double macro_auc = 0.0;
  double macro_micro_f1 = 0.0;
  /// Mean over the layers where weak metrics are present.
  std::optional<double> macro_weak_auc;
  std::optional<double> macro_weak_micro_f1;
  std::string variant;
  std::vector<std::uint64_t> seeds;

  /// variant, seed, layer, auc, micro_f1, weak_auc, weak_micro_f1,
  /// test_pos, test_neg, weak_pos, strong_pos, weak_neg; one row per layer
  /// then a "macro" row. Absent values are empty cells.
  CsvTable to_csv() const;
};

/// Test pairs of one layer restricted to weak ties: the weak positives and
/// an equal number of cross-community negatives. Negatives are a seeded
/// uniform draw from the cross-community test negatives; when those run
/// short, fresh cross-community non-edges disjoint from every negative set
/// of the split fill the gap. The result does not depend on list order.
struct WeakTestSet {
  EdgeList positives;
  EdgeList negatives;
  std::size_t strong_pos = 0;
};

WeakTestSet weak_test_set(const LayerGraph& layer, const LayerSplit& split,
                          const CommunityPartition& partition, std::uint64_t seed);

/// Overall metrics on test_pos u test_neg, weak metrics on weak_test_set,
/// both per layer and macro-averaged. Micro-F1 uses threshold 0.5.
EvaluationReport evaluate(const PairScorer& scorer, const MultiplexGraph& graph,
                          const DataSplit& split,
                          const std::vector<CommunityPartition>& partitions);

/// Scores from the fused embeddings and layer scorers of a trained model.
PairScorer model_scorer(MrgnnParams& params, const ModelInput& input);

EvaluationReport evaluate(MrgnnParams& params, const MultiplexGraph& graph, const DataSplit& split,
                          const std::vector<CommunityPartition>& partitions);

/// Mean and population standard deviation of the macro metrics over runs.
struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;
};

struct SeedSummary {
  std::string variant;
  MetricSummary auc, micro_f1, weak_auc, weak_micro_f1;
};

/// Absent weak values are skipped; a summary with count 0 has mean 0.
SeedSummary summarize(const std::vector<EvaluationReport>& runs);

/// A model configuration with a display label, e.g. "logit" or "semantic".
struct ModelVariant {
  std::string name;
  ModelConfig config;
};

/// One holdout experiment: split, early-stopped training, test metrics.
struct HoldoutRun {
  std::string variant;
  std::uint64_t seed = 0;
  DataSplit split;
  TrainResult result;
  EvaluationReport report;
};

/// split_edges(test_frac, val_frac, seed), model init_seed = seed,
/// train.seed = seed, then evaluate on the test pairs.
HoldoutRun run_holdout(const MultiplexGraph& graph, const ModelVariant& variant,
                       const TrainConfig& train_config, std::uint64_t seed, double test_frac,
                       double val_frac, const std::vector<CommunityPartition>& partitions);

/// run_holdout for every seed, in parallel; results follow the seed order.
std::vector<HoldoutRun> run_holdout_seeds(const MultiplexGraph& graph, const ModelVariant& variant,
                                          const TrainConfig& train_config,
                                          const std::vector<std::uint64_t>& seeds,
                                          double test_frac, double val_frac,
                                          const std::vector<CommunityPartition>& partitions);

struct SweepRow {
  std::string variant;
  double fraction = 0.0;
  std::size_t embed_dim = 0;
  std::uint64_t seed = 0;
  double auc = 0.0;
  double micro_f1 = 0.0;
  std::optional<double> weak_auc;
  std::optional<double> weak_micro_f1;
};

/// variant, fraction, embed_dim, seed, auc, micro_f1, weak_auc, weak_micro_f1.
CsvTable sweep_csv(const std::vector<SweepRow>& rows);

/// For every variant, fraction f and seed s: split_by_train_fraction(f, s),
/// model init_seed = s, train.seed = s, train for train.max_epochs without
/// validation, evaluate macro metrics on all held-out links. Grid points run
/// in parallel; row order is variant, fraction, seed.
std::vector<SweepRow> sweep_training_size(const MultiplexGraph& graph,
                                          const std::vector<double>& fractions,
                                          const std::vector<ModelVariant>& variants,
                                          const TrainConfig& train_config,
                                          const std::vector<std::uint64_t>& seeds,
                                          const std::vector<CommunityPartition>& partitions);

/// For every dim and seed: holdout split (test_frac, val_frac, s), the base
/// model with embed_dim = dim and init_seed = s, early-stopped training.
/// Rows are ordered by dim, then seed.
std::vector<SweepRow> sweep_embedding_dim(const MultiplexGraph& graph,
                                          const std::vector<std::size_t>& dims,
                                          const ModelVariant& base, const TrainConfig& train_config,
                                          const std::vector<std::uint64_t>& seeds,
                                          double test_frac, double val_frac,
                                          const std::vector<CommunityPartition>& partitions);

struct PairAttentionStats {
  std::size_t p = 0;
  std::size_t q = 0;
  double mean = 0.0;
  double std = 0.0;
  /// 20 equal bins over [0, 1]; the value 1 falls into the last bin.
  std::array<std::size_t, 20> histogram{};
};

struct AttentionStats {
  std::size_t num_layers = 0;
  std::vector<PairAttentionStats> pairs;

  /// Mean of a(p<-q); 1 when there are only two layers.
  double mean(std::size_t p, std::size_t q) const;
  /// Largest |mean(p<-q) - mean(q<-p)| over unordered pairs.
  double max_asymmetry() const;
  /// p, q, mean, std, bin_00 ... bin_19.
  CsvTable to_csv() const;
};

AttentionStats attention_stats(const AttentionTensor& attention);
AttentionStats attention_stats(MrgnnParams& params, const ModelInput& input);

/// Largest |sum_q a(p<-q) - 1| over all nodes and layers.
double max_normalization_error(const AttentionTensor& attention);

/// p_ij^(p) + sum_{q != p} mean_a(p<-q) p_ij^(q), every term scored by its
/// own layer scorer on that layer's intra-layer embeddings. `clamp`
/// restricts the result to [0, 1].
double mean_attention_predict(const MrgnnParams& params, const std::vector<DenseMatrix>& intra,
                              const AttentionStats& stats, Node i, Node j, std::size_t p,
                              bool clamp = true);

PairScorer mean_attention_scorer(MrgnnParams& params, const ModelInput& input,
                                 const AttentionStats& stats, bool clamp = true);

}  // namespace mrgnn
