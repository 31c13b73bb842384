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

// Network reconstruction from link predictions and deterministic
// susceptible-infected spreading.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrgnn/graph.hpp"
#include "mrgnn/io.hpp"

namespace mrgnn {

enum class Provenance { sampled, recovered };

struct ReconstructedNetwork {
  std::size_t layer_id = 0;
  std::size_t num_nodes = 0;
  /// Sorted canonical edges; provenance[i] tags edges[i].
  EdgeList edges;
  std::vector<Provenance> provenance;

  std::size_t num_sampled() const;
  std::size_t num_recovered() const;
  LayerGraph graph() const;
};

/// Score of the pair (i, j), i < j, in the layer being rebuilt.
using LinkScore = std::function<double(Node i, Node j)>;

/// Scores every node pair outside `base`; a pair is added iff its score is
/// at least `threshold` and it is an edge of `original`.
ReconstructedNetwork reconstruct(const LayerGraph& original, std::span<const Edge> base,
                                 const LinkScore& score, double threshold = 0.5);

struct SpreadTrace {
  Node source = 0;
  std::size_t num_nodes = 0;
  /// infected[t] is the sorted infected set after t synchronous steps;
  /// infected[0] = {source}. The last entry is the fixed point.
  std::vector<std::vector<Node>> infected;

  std::size_t terminal_step() const { return infected.size() - 1; }
  std::size_t terminal_size() const { return infected.back().size(); }
};

/// Uniform choice among non-isolated nodes; throws DataError if none.
Node choose_source(const LayerGraph& network, std::uint64_t seed);

/// Every infected node infects all susceptible neighbors each step, until
/// no new infection occurs. Without `source`, one is drawn by
/// choose_source(network, seed).
SpreadTrace si_spread(const LayerGraph& network, std::optional<Node> source, std::uint64_t seed);

struct NamedTrace {
  std::string name;
  SpreadTrace trace;
};

/// Long-format table: name, step, infected, fraction, terminal. Traces are
/// padded to a common length by repeating their fixed point. Throws
/// DataError when node counts or sources differ.
CsvTable compare_spreads(std::span<const NamedTrace> traces);

/// Edge-wise union of graphs over one node set (union-of-layers mode).
LayerGraph union_graph(std::span<const LayerGraph> layers);

/// Edge list with provenance: u, v, provenance.
CsvTable reconstruction_csv(const ReconstructedNetwork& network);

}  // namespace mrgnn
