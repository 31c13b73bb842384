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

#include "mrgnn/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "mrgnn/error.hpp"
#include "mrgnn/metrics.hpp"

namespace mrgnn {

namespace {

constexpr double kClamp = 1e-12;

struct LabeledPairs {
  EdgeList pairs;
  std::vector<double> labels;
};

LabeledPairs labeled(const EdgeList& pos, const EdgeList& neg) {
  LabeledPairs out;
  out.pairs.reserve(pos.size() + neg.size());
  out.pairs.insert(out.pairs.end(), pos.begin(), pos.end());
  out.pairs.insert(out.pairs.end(), neg.begin(), neg.end());
  out.labels.assign(pos.size(), 1.0);
  out.labels.resize(pos.size() + neg.size(), 0.0);
  return out;
}

ad::Var summed_loss(ad::Tape& tape, MrgnnParams& params, const std::vector<ad::Var>& fused,
                    const std::vector<LabeledPairs>& per_layer) {
  ad::Var total;
  bool first = true;
  for (std::size_t r = 0; r < per_layer.size(); ++r) {
    if (per_layer[r].pairs.empty()) continue;
    ad::Var p = score_links(tape, params, fused[r], r, per_layer[r].pairs);
    ad::Var l = ad::binary_cross_entropy(p, per_layer[r].labels, kClamp);
    total = first ? l : ad::add(total, l);
    first = false;
  }
  if (first) throw DataError("training objective has no pairs");
  return total;
}

void apply_sgd(ParamStore& store, double lr) {
  for (std::size_t i = 0; i < store.size(); ++i) store.value(i) -= lr * store.grad(i);
}

std::vector<double> validation_auc(const MrgnnParams& params, const std::vector<ad::Var>& fused,
                                   const DataSplit& split) {
  std::vector<double> out;
  const bool literal = params.config().literal_score_sign;
  for (std::size_t r = 0; r < split.layers.size(); ++r) {
    const LayerSplit& ls = split.layers[r];
    const DenseMatrix& z = fused[r].value();
    const DenseMatrix& mu = params.store().value(params.mu(r));
    std::vector<double> scores;
    std::vector<int> labels;
    for (const Edge& e : ls.val_pos) {
      scores.push_back(score_link(z, mu, e.u, e.v, literal));
      labels.push_back(1);
    }
    for (const Edge& e : ls.val_neg) {
      scores.push_back(score_link(z, mu, e.u, e.v, literal));
      labels.push_back(0);
    }
    out.push_back(auc(scores, labels));
  }
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw DataError("learning_rate must be > 0");
  if (patience < 1) throw DataError("patience must be >= 1");
  if (max_epochs < 1) throw DataError("max_epochs must be >= 1");
}

std::size_t resolve_batch_size(const TrainConfig& config, std::size_t num_nodes) {
  if (config.batch_size) return *config.batch_size;
  return num_nodes <= 2000 ? 0 : 512;
}

CsvTable TrainReport::to_csv(std::size_t num_layers) const {
  std::vector<std::string> header{"epoch", "loss"};
  for (std::size_t r = 0; r < num_layers; ++r) header.push_back("val_auc_" + std::to_string(r));
  header.push_back("val_auc_macro");
  CsvTable table(std::move(header));
  for (const EpochRecord& e : epochs) {
    std::vector<std::string> row{std::to_string(e.epoch), format_double(e.loss)};
    for (std::size_t r = 0; r < num_layers; ++r) {
      row.push_back(r < e.val_auc.size() ? format_double(e.val_auc[r]) : std::string());
    }
    row.push_back(format_optional(e.val_auc_macro));
    table.add_row(std::move(row));
  }
  return table;
}

ad::Var compute_loss(ad::Tape& tape, MrgnnParams& params, const std::vector<ad::Var>& fused,
                     const DataSplit& split) {
  if (split.layers.size() != fused.size()) throw DataError("split layer count does not match the model");
  std::vector<LabeledPairs> per_layer;
  for (const LayerSplit& ls : split.layers) {
    if (ls.train_pos.empty() && ls.train_neg.empty()) throw DataError("a layer has no training pairs");
    per_layer.push_back(labeled(ls.train_pos, ls.train_neg));
  }
  return summed_loss(tape, params, fused, per_layer);
}

double training_loss(MrgnnParams& params, const ModelInput& input, const DataSplit& split) {
  ad::Tape tape;
  ForwardPass fp = forward(tape, params, input);
  return compute_loss(tape, params, fp.fused, split).scalar();
}

double sgd_step(MrgnnParams& params, const ModelInput& input, const DataSplit& split,
                double learning_rate) {
  ad::Tape tape;
  ForwardPass fp = forward(tape, params, input);
  ad::Var loss = compute_loss(tape, params, fp.fused, split);
  params.store().zero_grad();
  tape.backward(loss);
  apply_sgd(params.store(), learning_rate);
  return loss.scalar();
}

TrainResult train(const ModelInput& input, const DataSplit& split, const ModelConfig& model,
                  const TrainConfig& config) {
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
    throw DataError("learning_rate must be >= 0");
  }
  if (config.patience < 1) throw DataError("patience must be >= 1");
  if (config.max_epochs < 1) throw DataError("max_epochs must be >= 1");
  if (split.layers.size() != input.num_layers()) throw DataError("split layer count does not match the graph");

  const auto start = std::chrono::steady_clock::now();
  TrainResult result{MrgnnParams::init(model, input.num_layers(), input.feature_width()), {}};
  MrgnnParams& params = result.params;
  TrainReport& report = result.report;
  const std::size_t layers = input.num_layers();

  std::vector<LabeledPairs> train_pairs;
  for (const LayerSplit& ls : split.layers) train_pairs.push_back(labeled(ls.train_pos, ls.train_neg));
  const bool has_val = config.early_stopping &&
                       std::all_of(split.layers.begin(), split.layers.end(), [](const LayerSplit& ls) {
                         return !ls.val_pos.empty() && !ls.val_neg.empty();
                       });

  report.initial_loss = training_loss(params, input, split);
  const std::size_t batch = resolve_batch_size(config, input.num_nodes());

  // Flattened (layer, index) list for mini-batching across layers.
  std::vector<std::pair<std::size_t, std::size_t>> flat;
  for (std::size_t r = 0; r < layers; ++r) {
    for (std::size_t i = 0; i < train_pairs[r].pairs.size(); ++i) flat.emplace_back(r, i);
  }
  const bool full_batch = batch == 0 || batch >= flat.size();
  std::mt19937_64 rng(derive_seed(config.seed, 0x5eed));

  double best_auc = -std::numeric_limits<double>::infinity();
  std::vector<DenseMatrix> best_values;
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    bool improved = false;
    auto check_validation = [&](const ForwardPass& fp) {
      if (!has_val) return;
      rec.val_auc = validation_auc(params, fp.fused, split);
      const double macro =
          std::accumulate(rec.val_auc.begin(), rec.val_auc.end(), 0.0) / static_cast<double>(layers);
      rec.val_auc_macro = macro;
      if (macro > best_auc) {
        best_auc = macro;
        improved = true;
        best_values.clear();
        for (std::size_t i = 0; i < params.store().size(); ++i) best_values.push_back(params.store().value(i));
        report.best_epoch = epoch;
      }
    };

    try {
      if (full_batch) {
        ad::Tape tape;
        ForwardPass fp = forward(tape, params, input);
        ad::Var loss = summed_loss(tape, params, fp.fused, train_pairs);
        check_validation(fp);
        params.store().zero_grad();
        tape.backward(loss);
        apply_sgd(params.store(), config.learning_rate);
        rec.loss = loss.scalar();
      } else {
        std::shuffle(flat.begin(), flat.end(), rng);
        double sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t off = 0; off < flat.size(); off += batch) {
          const std::size_t end = std::min(flat.size(), off + batch);
          std::vector<LabeledPairs> chunk(layers);
          for (std::size_t t = off; t < end; ++t) {
            const auto [r, i] = flat[t];
            chunk[r].pairs.push_back(train_pairs[r].pairs[i]);
            chunk[r].labels.push_back(train_pairs[r].labels[i]);
          }
          ad::Tape tape;
          ForwardPass fp = forward(tape, params, input);
          ad::Var loss = summed_loss(tape, params, fp.fused, chunk);
          if (off == 0) check_validation(fp);
          params.store().zero_grad();
          tape.backward(loss);
          apply_sgd(params.store(), config.learning_rate);
          sum += loss.scalar();
          ++batches;
        }
        rec.loss = sum / static_cast<double>(batches);
      }
    } catch (const NumericError& e) {
      throw NumericError("training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
    }

    report.epochs.push_back(std::move(rec));
    report.epochs_run = epoch;
    if (has_val) {
      since_best = improved ? 0 : since_best + 1;
      if (since_best >= config.patience) {
        report.stopped_early = true;
        break;
      }
    }
  }

  if (has_val) {
    for (std::size_t i = 0; i < best_values.size(); ++i) params.store().value(i) = best_values[i];
  } else {
    report.best_epoch = report.epochs_run + 1;
  }
  params.store().zero_grad();
  report.final_loss = training_loss(params, input, split);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

TrainResult train(const MultiplexGraph& graph, const DataSplit& split, const ModelConfig& model,
                  const TrainConfig& config) {
  return train(make_model_input(graph, split), split, model, config);
}

}  // namespace mrgnn
