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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mrgnn/tensor.hpp"

namespace mrgnn {

using Node = std::size_t;

/// Undirected edge stored with the lesser endpoint first.
struct Edge {
  Node u = 0;
  Node v = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Orders the endpoints so that u < v. Self-loops are returned unchanged.
constexpr Edge canonical(Node a, Node b) { return a < b ? Edge{a, b} : Edge{b, a}; }

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(e.u) << 32) ^ e.v);
  }
};

using EdgeList = std::vector<Edge>;

/// One relation of a multiplex network: a simple undirected graph over the
/// shared node index space, with sorted CSR adjacency.
class LayerGraph {
 public:
  LayerGraph() = default;

  /// Edges must be canonical, in range and free of duplicates; they are
  /// sorted internally. Throws DataError otherwise.
  LayerGraph(std::size_t layer_id, std::size_t num_nodes, EdgeList edges);

  /// Builds a layer from raw pairs, dropping self-loops and duplicates
  /// (in either orientation). `dropped` receives the number discarded.
  static LayerGraph from_pairs(std::size_t layer_id, std::size_t num_nodes,
                               std::span<const std::pair<Node, Node>> pairs,
                               std::size_t* dropped = nullptr);

  std::size_t id() const { return id_; }
  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const EdgeList& edges() const { return edges_; }

  std::span<const Node> neighbors(Node n) const {
    return {targets_.data() + offsets_[n], targets_.data() + offsets_[n + 1]};
  }
  std::size_t degree(Node n) const { return offsets_[n + 1] - offsets_[n]; }
  bool has_edge(Node a, Node b) const;

 private:
  std::size_t id_ = 0;
  std::size_t num_nodes_ = 0;
  EdgeList edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Node> targets_;
};

/// Shared node set, one LayerGraph per relation, optional node attributes
/// (num_nodes x d0, possibly d0 = 0).
class MultiplexGraph {
 public:
  MultiplexGraph() = default;
  MultiplexGraph(std::size_t num_nodes, std::vector<LayerGraph> layers,
                 DenseMatrix attributes = {});

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_layers() const { return layers_.size(); }
  const LayerGraph& layer(std::size_t r) const { return layers_.at(r); }
  const std::vector<LayerGraph>& layers() const { return layers_; }
  const DenseMatrix& attributes() const { return attributes_; }
  std::size_t attribute_width() const { return static_cast<std::size_t>(attributes_.cols()); }
  const std::vector<std::string>& layer_names() const { return layer_names_; }
  void set_layer_names(std::vector<std::string> names);

 private:
  std::size_t num_nodes_ = 0;
  std::vector<LayerGraph> layers_;
  DenseMatrix attributes_;
  std::vector<std::string> layer_names_;
};

struct LoadWarnings {
  /// Per layer: number of self-loops and duplicate edges dropped.
  std::vector<std::size_t> dropped_edges;
  std::size_t total() const;
};

/// Reads a dataset descriptor (JSON):
///
///     {"num_nodes": 246,
///      "layers": ["advice.tsv", {"name": "friends", "path": "friends.tsv"}],
///      "attributes": "attributes.csv"}
///
/// Paths are resolved relative to the descriptor. Edge files hold one
/// "u<TAB>v" pair per line (0-based); attribute files one comma-separated row
/// per node. Requires at least two layers.
MultiplexGraph load_multiplex(const std::filesystem::path& descriptor,
                              LoadWarnings* warnings = nullptr);

/// Writes descriptor, edge lists and attributes into `dir`; loading the
/// returned descriptor path reproduces the graph exactly.
std::filesystem::path save_multiplex(const MultiplexGraph& graph,
                                     const std::filesystem::path& dir,
                                     const std::string& name = "dataset");

std::vector<std::pair<Node, Node>> read_edge_list(const std::filesystem::path& path);
void write_edge_list(const std::filesystem::path& path, const EdgeList& edges);

/// X^(r): row n = attributes[n] || binary adjacency row of n in `basis`.
DenseMatrix build_node_features(const MultiplexGraph& graph, const LayerGraph& basis);

/// Sparse twin of build_node_features; identical entries.
SparseMatrix build_node_features_sparse(const MultiplexGraph& graph, const LayerGraph& basis);

struct LayerSplit {
  EdgeList train_pos, train_neg;
  EdgeList val_pos, val_neg;
  EdgeList test_pos, test_neg;
};

/// Per-layer positive/negative edge partitions plus the parameters that
/// produced them. `kind` is "holdout" (test/val fractions) or
/// "train_fraction" (train on a fraction, test on the rest, no validation).
struct DataSplit {
  std::vector<LayerSplit> layers;
  std::uint64_t seed = 0;
  std::string kind = "holdout";
  double test_frac = 0.0;
  double val_frac = 0.0;
  double train_frac = 0.0;
};

/// Two-stage holdout: floor(test_frac*|E|) test positives, then
/// floor(val_frac*|remaining|) validation positives, the rest train.
/// Each subset gets the same number of negatives; all negatives of a layer
/// are mutually disjoint. Deterministic in `seed`.
DataSplit split_edges(const MultiplexGraph& graph, double test_frac, double val_frac,
                      std::uint64_t seed);

/// Training-size protocol: floor((1-train_frac)*|E|) test positives, the rest
/// train, equal-count negatives, no validation set.
DataSplit split_by_train_fraction(const MultiplexGraph& graph, double train_frac,
                                  std::uint64_t seed);

/// The layer restricted to its training positives.
LayerGraph training_graph(const MultiplexGraph& graph, const DataSplit& split, std::size_t layer);

/// `count` distinct canonical non-edges drawn uniformly without replacement,
/// disjoint from the layer and from `exclude`.
EdgeList sample_negatives(const LayerGraph& layer, std::size_t count,
                          std::span<const Edge> exclude, std::uint64_t seed);

/// Union of all layers' edges over the shared node set.
LayerGraph union_of_layers(const MultiplexGraph& graph);

/// splitmix64 mix of a base seed with stream tags; used to derive
/// independent per-layer / per-purpose seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace mrgnn
