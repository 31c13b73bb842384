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

#include "mrgnn/community.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "mrgnn/error.hpp"

namespace mrgnn {

namespace {

constexpr double kResolution = 1.0;
constexpr double kGainEps = 1e-12;

// Weighted graph used across Louvain levels. Self-loop weight holds edges
// collapsed inside a super-node and counts twice toward its degree.
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::vector<double> self_loop;
  std::vector<double> degree;
  double two_m = 0.0;

  std::size_t size() const { return adj.size(); }

  void finish() {
    degree.assign(size(), 0.0);
    two_m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      double k = 2.0 * self_loop[i];
      for (auto [j, w] : adj[i]) k += w;
      degree[i] = k;
      two_m += k;
    }
  }
};

WeightedGraph from_layer(const LayerGraph& layer) {
  WeightedGraph g;
  g.adj.resize(layer.num_nodes());
  g.self_loop.assign(layer.num_nodes(), 0.0);
  for (const Edge& e : layer.edges()) {
    g.adj[e.u].emplace_back(e.v, 1.0);
    g.adj[e.v].emplace_back(e.u, 1.0);
  }
  g.finish();
  return g;
}

// Local moving phase. Returns true if any node changed community.
bool move_nodes(const WeightedGraph& g, std::vector<std::size_t>& comm, std::mt19937_64& rng) {
  const std::size_t n = g.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += g.degree[i];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i : order) {
      const std::size_t own = comm[i];
      const double k = g.degree[i];
      touched.clear();
      touched.push_back(own);
      for (auto [j, w] : g.adj[i]) {
        const std::size_t c = comm[j];
        if (link[c] == 0.0 && std::find(touched.begin(), touched.end(), c) == touched.end()) {
          touched.push_back(c);
        }
        link[c] += w;
      }
      tot[own] -= k;
      std::size_t best = own;
      double best_gain = link[own] - kResolution * tot[own] * k / g.two_m;
      for (std::size_t c : touched) {
        const double gain = link[c] - kResolution * tot[c] * k / g.two_m;
        if (gain > best_gain + kGainEps) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += k;
      comm[i] = best;
      for (std::size_t c : touched) link[c] = 0.0;
      if (best != own) {
        moved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

// Renumbers `comm` to 0..k-1 by first appearance; returns k.
std::size_t renumber(std::vector<std::size_t>& comm) {
  std::vector<std::size_t> map(comm.size(), SIZE_MAX);
  std::size_t next = 0;
  for (auto& c : comm) {
    if (map[c] == SIZE_MAX) map[c] = next++;
    c = map[c];
  }
  return next;
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::size_t>& comm, std::size_t k) {
  WeightedGraph out;
  out.adj.resize(k);
  out.self_loop.assign(k, 0.0);
  std::vector<std::vector<std::pair<std::size_t, double>>> acc(k);
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.self_loop[comm[i]] += g.self_loop[i];
    for (auto [j, w] : g.adj[i]) {
      if (j < i) continue;
      const std::size_t a = comm[i], b = comm[j];
      if (a == b) {
        out.self_loop[a] += w;
      } else {
        acc[a].emplace_back(b, w);
        acc[b].emplace_back(a, w);
      }
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    auto& list = acc[c];
    std::sort(list.begin(), list.end());
    for (auto [j, w] : list) {
      if (!out.adj[c].empty() && out.adj[c].back().first == j) {
        out.adj[c].back().second += w;
      } else {
        out.adj[c].emplace_back(j, w);
      }
    }
  }
  out.finish();
  return out;
}

}  // namespace

std::size_t CommunityPartition::num_communities() const {
  if (assignment.empty()) return 0;
  return *std::max_element(assignment.begin(), assignment.end()) + 1;
}

double modularity(const LayerGraph& layer, std::span<const std::size_t> assignment, double resolution) {
  if (assignment.size() != layer.num_nodes()) throw DataError("assignment size != num_nodes");
  const double m = static_cast<double>(layer.num_edges());
  if (m == 0.0) return 0.0;
  const std::size_t k = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<double> internal(k, 0.0), degree(k, 0.0);
  for (const Edge& e : layer.edges()) {
    if (assignment[e.u] == assignment[e.v]) internal[assignment[e.u]] += 1.0;
  }
  for (Node n = 0; n < layer.num_nodes(); ++n) degree[assignment[n]] += static_cast<double>(layer.degree(n));
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double frac = degree[c] / (2.0 * m);
    q += internal[c] / m - resolution * frac * frac;
  }
  return q;
}

CommunityPartition louvain_partition(const LayerGraph& layer, std::uint64_t seed) {
  if (layer.num_edges() == 0) {
    throw DataError("louvain: layer " + std::to_string(layer.id()) + " has no edges");
  }
  std::mt19937_64 rng(seed);
  WeightedGraph g = from_layer(layer);
  std::vector<std::size_t> membership(layer.num_nodes());
  std::iota(membership.begin(), membership.end(), 0);

  for (;;) {
    std::vector<std::size_t> comm(g.size());
    std::iota(comm.begin(), comm.end(), 0);
    const bool moved = move_nodes(g, comm, rng);
    if (!moved) break;
    const std::size_t k = renumber(comm);
    for (auto& c : membership) c = comm[c];
    if (k == g.size()) break;
    g = aggregate(g, comm, k);
  }

  CommunityPartition out;
  out.layer_id = layer.id();
  out.assignment = std::move(membership);
  renumber(out.assignment);
  out.modularity = modularity(layer, out.assignment);
  return out;
}

std::vector<CommunityPartition> partition_layers(const MultiplexGraph& graph, std::uint64_t seed) {
  std::vector<CommunityPartition> out;
  out.reserve(graph.num_layers());
  for (std::size_t r = 0; r < graph.num_layers(); ++r) {
    out.push_back(louvain_partition(graph.layer(r), derive_seed(seed, r, 11)));
  }
  return out;
}

std::vector<TieLabel> label_ties(std::span<const Edge> edges, const CommunityPartition& partition) {
  std::vector<TieLabel> out;
  out.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= partition.assignment.size() || e.v >= partition.assignment.size()) {
      throw DataError("label_ties: node " + std::to_string(std::max(e.u, e.v)) + " missing from partition");
    }
    out.push_back({e, is_weak_tie(e, partition) ? TieStrength::weak : TieStrength::strong});
  }
  return out;
}

}  // namespace mrgnn
