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

#include <cstdint>
#include <span>
#include <vector>

#include "mrgnn/graph.hpp"

namespace mrgnn {

struct CommunityPartition {
  std::size_t layer_id = 0;
  /// Community id per node, renumbered 0..k-1 in order of first appearance.
  std::vector<std::size_t> assignment;
  double modularity = 0.0;

  std::size_t num_communities() const;
  bool same_community(Node a, Node b) const { return assignment.at(a) == assignment.at(b); }
};

/// Newman-Girvan modularity of an assignment on an unweighted layer.
double modularity(const LayerGraph& layer, std::span<const std::size_t> assignment,
                  double resolution = 1.0);

/// Two-phase Louvain (local moves with strictly positive gain, then
/// coarsening, repeated to a fixed point) at resolution 1. Node visit order
/// is shuffled from `seed`. Isolated nodes stay singletons.
CommunityPartition louvain_partition(const LayerGraph& layer, std::uint64_t seed);

/// One partition per layer, each computed on that layer's full edge set.
std::vector<CommunityPartition> partition_layers(const MultiplexGraph& graph, std::uint64_t seed);

enum class TieStrength { weak, strong };

struct TieLabel {
  Edge edge;
  TieStrength label;
};

/// weak iff the endpoints lie in different communities. Works for node pairs
/// that are not edges as well.
std::vector<TieLabel> label_ties(std::span<const Edge> edges, const CommunityPartition& partition);

inline bool is_weak_tie(const Edge& e, const CommunityPartition& partition) {
  return !partition.same_community(e.u, e.v);
}

}  // namespace mrgnn
