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

#include "mrgnn/synthetic.hpp"

#include <algorithm>
#include <random>

#include "mrgnn/error.hpp"

namespace mrgnn {

namespace {

bool coin(std::mt19937_64& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

}  // namespace

SbmGraph correlated_sbm(const SbmConfig& c) {
  if (c.num_nodes < 2 || c.num_blocks < 1 || c.num_layers < 2) throw DataError("sbm: invalid sizes");
  for (double p : {c.p_in, c.p_out, c.keep, c.block_perturb}) {
    if (!(p >= 0.0 && p <= 1.0)) throw DataError("sbm: probabilities must lie in [0, 1]");
  }
  std::mt19937_64 rng(derive_seed(c.seed, 0x5b3));
  SbmGraph out;
  out.blocks.resize(c.num_nodes);
  for (Node n = 0; n < c.num_nodes; ++n) out.blocks[n] = n % c.num_blocks;

  EdgeList parent;
  for (Node a = 0; a < c.num_nodes; ++a) {
    for (Node b = a + 1; b < c.num_nodes; ++b) {
      if (coin(rng, out.blocks[a] == out.blocks[b] ? c.p_in : c.p_out)) parent.push_back({a, b});
    }
  }

  std::vector<LayerGraph> layers;
  for (std::size_t r = 0; r < c.num_layers; ++r) {
    std::vector<std::size_t> labels = out.blocks;
    if (r > 0) {
      std::uniform_int_distribution<std::size_t> any_block(0, c.num_blocks - 1);
      for (auto& l : labels) {
        if (coin(rng, c.block_perturb)) l = any_block(rng);
      }
    }
    std::vector<std::pair<Node, Node>> pairs;
    for (const Edge& e : parent) {
      if (coin(rng, c.keep)) pairs.emplace_back(e.u, e.v);
    }
    for (Node a = 0; a < c.num_nodes; ++a) {
      for (Node b = a + 1; b < c.num_nodes; ++b) {
        const double p = (labels[a] == labels[b] ? c.p_in : c.p_out) * (1.0 - c.keep);
        if (coin(rng, p)) pairs.emplace_back(a, b);
      }
    }
    layers.push_back(LayerGraph::from_pairs(r, c.num_nodes, pairs));
  }
  out.graph = MultiplexGraph(c.num_nodes, std::move(layers));
  return out;
}

MultiplexGraph ckm_surrogate(std::uint64_t seed) {
  constexpr std::size_t kNodes = 246;
  constexpr std::size_t kTowns = 4;
  constexpr std::size_t kSubs = 3;
  std::mt19937_64 rng(derive_seed(seed, 0xc4));

  // Contiguous towns, each split into three contiguous sub-communities.
  std::vector<std::size_t> town(kNodes), sub(kNodes);
  for (Node n = 0; n < kNodes; ++n) {
    town[n] = n * kTowns / kNodes;
    const std::size_t start = (town[n] * kNodes + kTowns - 1) / kTowns;
    const std::size_t end = ((town[n] + 1) * kNodes + kTowns - 1) / kTowns;
    sub[n] = town[n] * kSubs + (n - start) * kSubs / (end - start);
  }
  std::vector<double> activity(kNodes);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double& w : activity) {
    const double u = unit(rng);
    w = 0.5 + 1.5 * u * u;
  }
  auto base_prob = [&](Node a, Node b) {
    if (sub[a] == sub[b]) return 0.2;
    if (town[a] == town[b]) return 0.025;
    return 0.0012;
  };

  EdgeList parent;
  for (Node a = 0; a < kNodes; ++a) {
    for (Node b = a + 1; b < kNodes; ++b) {
      if (coin(rng, std::min(1.0, base_prob(a, b) * activity[a] * activity[b]))) parent.push_back({a, b});
    }
  }

  const double keep[3] = {0.55, 0.62, 0.5};
  const double noise[3] = {0.12, 0.1, 0.14};
  std::vector<LayerGraph> layers;
  for (std::size_t r = 0; r < 3; ++r) {
    std::vector<std::pair<Node, Node>> pairs;
    for (const Edge& e : parent) {
      if (coin(rng, keep[r])) pairs.emplace_back(e.u, e.v);
    }
    for (Node a = 0; a < kNodes; ++a) {
      for (Node b = a + 1; b < kNodes; ++b) {
        if (coin(rng, std::min(1.0, noise[r] * base_prob(a, b) * activity[a] * activity[b]))) pairs.emplace_back(a, b);
      }
    }
    layers.push_back(LayerGraph::from_pairs(r, kNodes, pairs));
  }
  MultiplexGraph g(kNodes, std::move(layers));
  g.set_layer_names({"synthetic_advice", "synthetic_discussion", "synthetic_friendship"});
  return g;
}

}  // namespace mrgnn
