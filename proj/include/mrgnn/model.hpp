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

// The multiplex relational GNN forward computation.
//
//   1. Per layer, K steps of mean aggregation over the node itself and its
//      top-ranked neighbors, each followed by a layer/step specific linear
//      map and ReLU. Neighbors are ranked by exp(relu(U [h_n || h_u])).
//   2. A projection tanh(M h + b) shared by all layers.
//   3. Per node, attention over the other layers (logit or semantic
//      aggregator), then fusion z^(p) = h^(p) + sum_q a(p<-q) h^(q).
//   4. Layer-specific logistic link scores on z_i (.) z_j.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mrgnn/autodiff.hpp"
#include "mrgnn/graph.hpp"

namespace mrgnn {

enum class Aggregator { logit, semantic };

std::string to_string(Aggregator a);
/// Accepts "logit" or "semantic"; throws DataError otherwise.
Aggregator parse_aggregator(const std::string& name);

struct ModelConfig {
  std::size_t embed_dim = 128;
  std::size_t steps = 2;
  std::size_t neighbor_cap = 10;
  Aggregator aggregator = Aggregator::semantic;
  std::uint64_t init_seed = 0;
  /// false gives the single-layer ablation z = h.
  bool fuse_layers = true;
  /// Score with 1/(1+exp(+x)) instead of the standard sigmoid.
  bool literal_score_sign = false;

  /// Throws DataError on d, K or cap below 1.
  void validate() const;
};

/// Parameter schema over a ParamStore. Names:
///   W<r>_<k>, U<r>_<k>  propagation and sampling, k = 1..K
///   M, b                shared projection
///   theta<r>            logit aggregator
///   V<r>, Q             semantic aggregator
///   mu<r>               link scorer
class MrgnnParams {
 public:
  MrgnnParams() = default;

  /// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] with fan_in = columns;
  /// b starts at zero.
  static MrgnnParams init(const ModelConfig& config, std::size_t num_layers,
                          std::size_t feature_width);

  /// Rebinds an existing store (for checkpoints). Validates names and shapes.
  static MrgnnParams from_store(const ModelConfig& config, std::size_t num_layers,
                                std::size_t feature_width, ParamStore store);

  const ModelConfig& config() const { return config_; }
  std::size_t num_layers() const { return num_layers_; }
  std::size_t feature_width() const { return feature_width_; }
  ParamStore& store() { return store_; }
  const ParamStore& store() const { return store_; }

  std::size_t W(std::size_t r, std::size_t k) const { return w_.at(r).at(k - 1); }
  std::size_t U(std::size_t r, std::size_t k) const { return u_.at(r).at(k - 1); }
  std::size_t M() const { return m_; }
  std::size_t b() const { return b_; }
  std::size_t theta(std::size_t r) const { return theta_.at(r); }
  std::size_t V(std::size_t r) const { return v_.at(r); }
  std::size_t Q() const { return q_; }
  std::size_t mu(std::size_t r) const { return mu_.at(r); }

 private:
  void bind();

  ModelConfig config_;
  std::size_t num_layers_ = 0;
  std::size_t feature_width_ = 0;
  ParamStore store_;
  std::vector<std::vector<std::size_t>> w_, u_;
  std::size_t m_ = 0, b_ = 0, q_ = 0;
  std::vector<std::size_t> theta_, v_, mu_;
};

/// Expected parameter names and shapes, in creation order.
std::vector<std::pair<std::string, std::pair<Eigen::Index, Eigen::Index>>> parameter_schema(
    const ModelConfig& config, std::size_t num_layers, std::size_t feature_width);

/// Constant inputs of a forward pass: per-layer features and the graphs
/// messages travel over (the training subgraphs).
struct ModelInput {
  std::vector<std::shared_ptr<const SparseMatrix>> features;
  std::vector<LayerGraph> basis;

  std::size_t num_layers() const { return basis.size(); }
  std::size_t num_nodes() const { return basis.empty() ? 0 : basis.front().num_nodes(); }
  std::size_t feature_width() const;
};

/// Features and message graphs from the training positives of `split`.
ModelInput make_model_input(const MultiplexGraph& graph, const DataSplit& split);
/// Features and message graphs from given per-layer basis graphs.
ModelInput make_model_input(const MultiplexGraph& graph, std::vector<LayerGraph> basis);

struct RankedNeighbor {
  Node node = 0;
  double weight = 0.0;
};

/// exp(relu(U [h_n || h_u])) for every neighbor u of n, sorted by weight
/// descending with ties broken by ascending index.
std::vector<RankedNeighbor> sampling_weights(Node n, std::span<const Node> neighbors,
                                             const DenseMatrix& h_prev, const DenseMatrix& u);

/// First min(cap, len) nodes of a ranked list.
std::vector<Node> select_neighbors(std::span<const RankedNeighbor> ranked, std::size_t cap);

/// Aggregation groups for one step: group n = {n} followed by the selected
/// neighbors. Only nodes with degree above `cap` need ranking; `self_score`
/// and `neighbor_score` are H U_self^T and H U_neighbor^T.
std::vector<std::vector<std::size_t>> aggregation_groups(const LayerGraph& basis,
                                                         const Eigen::VectorXd& self_score,
                                                         const Eigen::VectorXd& neighbor_score,
                                                         std::size_t cap);

struct ForwardPass {
  /// Per layer: projected intra-layer embeddings h^(r), N x d.
  std::vector<ad::Var> intra;
  /// Per layer: fused embeddings z^(r), N x d.
  std::vector<ad::Var> fused;
  /// Per layer p: N x (R-1) attention, columns are q != p in ascending order.
  std::vector<ad::Var> attention;
};

/// K-step propagation for layer r; returns h^{K,(r)} before projection.
ad::Var propagate_intra(ad::Tape& tape, MrgnnParams& params, const ModelInput& input,
                        std::size_t r);
ad::Var project_shared(ad::Tape& tape, MrgnnParams& params, const ad::Var& h);
ad::Var attention_logit(ad::Tape& tape, MrgnnParams& params, const std::vector<ad::Var>& h,
                        std::size_t p);
ad::Var attention_semantic(ad::Tape& tape, MrgnnParams& params, const std::vector<ad::Var>& h,
                           std::size_t p);
ad::Var fuse(const std::vector<ad::Var>& h, const ad::Var& attention, std::size_t p);

ForwardPass forward(ad::Tape& tape, MrgnnParams& params, const ModelInput& input);

/// N x 1 link probabilities for pairs of layer r given embeddings z^(r).
ad::Var score_links(ad::Tape& tape, MrgnnParams& params, const ad::Var& z, std::size_t r,
                    std::span<const Edge> pairs);

/// Value-level scorer: sigmoid(mu . (z_i (.) z_j)), or the literal sign.
double score_link(const DenseMatrix& z, const DenseMatrix& mu, Node i, Node j,
                  bool literal_sign = false);

/// attention[n][p][q] over ordered pairs p != q; entries with q == p are 0.
class AttentionTensor {
 public:
  AttentionTensor() = default;
  AttentionTensor(std::size_t num_nodes, std::size_t num_layers);

  double operator()(Node n, std::size_t p, std::size_t q) const {
    return data_[(n * layers_ + p) * layers_ + q];
  }
  double& operator()(Node n, std::size_t p, std::size_t q) {
    return data_[(n * layers_ + p) * layers_ + q];
  }
  std::size_t num_nodes() const { return nodes_; }
  std::size_t num_layers() const { return layers_; }

 private:
  std::size_t nodes_ = 0, layers_ = 0;
  std::vector<double> data_;
};

/// Forward-pass values without gradients.
struct EmbeddingSet {
  std::vector<DenseMatrix> intra;
  std::vector<DenseMatrix> fused;
  AttentionTensor attention;
};

EmbeddingSet embed(MrgnnParams& params, const ModelInput& input);

}  // namespace mrgnn
