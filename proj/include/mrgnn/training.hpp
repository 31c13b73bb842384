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

// Joint optimization of all layer objectives with plain SGD and early
// stopping on macro validation AUC.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mrgnn/io.hpp"
#include "mrgnn/model.hpp"

namespace mrgnn {

struct TrainConfig {
  double learning_rate = 0.7;
  std::size_t max_epochs = 500;
  /// nullopt picks full batch for graphs up to 2000 nodes, else 512.
  /// 0 requests full batch explicitly.
  std::optional<std::size_t> batch_size;
  std::size_t patience = 20;
  std::uint64_t seed = 0;
  /// Early stopping needs validation pairs; without them (or when false)
  /// training runs all max_epochs and returns the final parameters.
  bool early_stopping = true;

  /// Throws DataError when learning_rate <= 0, patience < 1 or
  /// max_epochs < 1. train() itself also accepts learning_rate == 0.
  void validate() const;
};

/// Effective number of pairs per step; 0 means full batch.
std::size_t resolve_batch_size(const TrainConfig& config, std::size_t num_nodes);

struct EpochRecord {
  std::size_t epoch = 0;
  /// Objective at the parameters this epoch started from (full batch), or
  /// the mean of the mini-batch objectives.
  double loss = 0.0;
  /// Per layer validation AUC at the epoch's starting parameters.
  std::vector<double> val_auc;
  std::optional<double> val_auc_macro;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  double initial_loss = 0.0;
  /// Objective at the returned parameters.
  double final_loss = 0.0;
  /// Epoch whose starting parameters were returned; epochs_run + 1 means
  /// the parameters after the last update.
  std::size_t best_epoch = 0;
  std::size_t epochs_run = 0;
  bool stopped_early = false;
  double wall_seconds = 0.0;

  /// epoch, loss, val_auc_<r>..., val_auc_macro.
  CsvTable to_csv(std::size_t num_layers) const;
};

struct TrainResult {
  MrgnnParams params;
  TrainReport report;
};

/// Sum over layers of the mean binary cross-entropy on train_pos (label 1)
/// and train_neg (label 0), with probabilities clamped to [1e-12, 1-1e-12].
ad::Var compute_loss(ad::Tape& tape, MrgnnParams& params, const std::vector<ad::Var>& fused,
                     const DataSplit& split);

/// Value of compute_loss at the current parameters.
double training_loss(MrgnnParams& params, const ModelInput& input, const DataSplit& split);

/// One plain SGD step p <- p - lr * grad on the full training objective.
/// Returns the objective before the step.
double sgd_step(MrgnnParams& params, const ModelInput& input, const DataSplit& split,
                double learning_rate);

TrainResult train(const ModelInput& input, const DataSplit& split, const ModelConfig& model,
                  const TrainConfig& config);
TrainResult train(const MultiplexGraph& graph, const DataSplit& split, const ModelConfig& model,
                  const TrainConfig& config);

}  // namespace mrgnn
