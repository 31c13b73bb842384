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

// Small graphs shared by several test files.

#pragma once

#include <random>
#include <utility>
#include <vector>

#include "mrgnn/graph.hpp"

namespace fixtures {

using PairList = std::vector<std::pair<std::size_t, std::size_t>>;

/// Two 4-cliques {0..3} and {4..7} joined by the bridge (3, 4).
inline PairList two_cliques_pairs() {
  PairList p;
  for (std::size_t base : {0u, 4u}) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) p.emplace_back(base + i, base + j);
    }
  }
  p.emplace_back(3, 4);
  return p;
}

inline mrgnn::LayerGraph layer_from(std::size_t n, const PairList& pairs, std::size_t id = 0) {
  return mrgnn::LayerGraph::from_pairs(id, n, pairs);
}

/// Random simple graph where every node keeps degree <= max_degree.
inline PairList random_pairs(std::size_t n, double p, std::size_t max_degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::size_t> deg(n, 0);
  PairList out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (u(rng) < p && deg[i] < max_degree && deg[j] < max_degree) {
        out.emplace_back(i, j);
        ++deg[i];
        ++deg[j];
      }
    }
  }
  return out;
}

/// `layers`-layer multiplex on n nodes; every layer a random graph with
/// bounded degree. Ring edges guarantee every layer has at least n edges.
inline mrgnn::MultiplexGraph toy_multiplex(std::size_t n, std::size_t layers, std::uint64_t seed,
                                           double p = 0.3, std::size_t max_degree = 5) {
  std::vector<mrgnn::LayerGraph> out;
  for (std::size_t r = 0; r < layers; ++r) {
    PairList pairs = random_pairs(n, p, max_degree - 2, seed * 31 + r);
    for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(i, (i + 1 + r) % n);
    out.push_back(mrgnn::LayerGraph::from_pairs(r, n, pairs));
  }
  return mrgnn::MultiplexGraph(n, std::move(out));
}

}  // namespace fixtures
