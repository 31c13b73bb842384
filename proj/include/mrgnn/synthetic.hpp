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

// Synthetic multiplex generators for tests and offline experiments.

#pragma once

#include <cstdint>
#include <vector>

#include "mrgnn/graph.hpp"

namespace mrgnn {

/// Multiplex stochastic block model whose layers share one parent graph.
/// Each layer keeps every parent edge with probability `keep` and adds
/// independent noise edges drawn with probabilities (1 - keep) * p_in and
/// (1 - keep) * p_out under the layer's own block labels. Layers after the
/// first relabel each node to a uniformly random block with probability
/// `block_perturb` before drawing their noise.
struct SbmConfig {
  std::size_t num_nodes = 300;
  std::size_t num_blocks = 4;
  std::size_t num_layers = 2;
  double p_in = 0.04;
  double p_out = 0.004;
  double keep = 0.75;
  double block_perturb = 0.1;
  std::uint64_t seed = 0;
};

struct SbmGraph {
  MultiplexGraph graph;
  /// Parent block of every node; block b holds nodes with index % blocks == b.
  std::vector<std::size_t> blocks;
};

SbmGraph correlated_sbm(const SbmConfig& config);

/// Synthetic stand-in shaped like the physicians' multiplex network: 246
/// nodes in four towns of three sub-communities, three layers of roughly
/// 400 to 500 edges, heterogeneous degrees, no node attributes. Layer
/// names carry a "synthetic_" prefix.
MultiplexGraph ckm_surrogate(std::uint64_t seed);

}  // namespace mrgnn
