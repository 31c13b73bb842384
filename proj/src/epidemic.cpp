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

#include "mrgnn/epidemic.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

#include "mrgnn/error.hpp"

namespace mrgnn {

std::size_t ReconstructedNetwork::num_sampled() const {
  return static_cast<std::size_t>(std::count(provenance.begin(), provenance.end(), Provenance::sampled));
}

std::size_t ReconstructedNetwork::num_recovered() const {
  return static_cast<std::size_t>(std::count(provenance.begin(), provenance.end(), Provenance::recovered));
}

LayerGraph ReconstructedNetwork::graph() const { return LayerGraph(layer_id, num_nodes, edges); }

ReconstructedNetwork reconstruct(const LayerGraph& original, std::span<const Edge> base,
                                 const LinkScore& score, double threshold) {
  std::unordered_set<Edge, EdgeHash> in_base;
  for (const Edge& e : base) {
    if (!original.has_edge(e.u, e.v)) throw DataError("base sample contains a pair missing from the layer");
    in_base.insert(canonical(e.u, e.v));
  }
  std::vector<std::pair<Edge, Provenance>> tagged;
  for (const Edge& e : in_base) tagged.push_back({e, Provenance::sampled});
  const std::size_t n = original.num_nodes();
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      if (in_base.contains(Edge{i, j})) continue;
      if (score(i, j) >= threshold && original.has_edge(i, j)) tagged.push_back({{i, j}, Provenance::recovered});
    }
  }
  std::sort(tagged.begin(), tagged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  ReconstructedNetwork out;
  out.layer_id = original.id();
  out.num_nodes = n;
  for (const auto& [e, tag] : tagged) {
    out.edges.push_back(e);
    out.provenance.push_back(tag);
  }
  return out;
}

Node choose_source(const LayerGraph& network, std::uint64_t seed) {
  std::vector<Node> candidates;
  for (Node n = 0; n < network.num_nodes(); ++n) {
    if (network.degree(n) > 0) candidates.push_back(n);
  }
  if (candidates.empty()) throw DataError("network has no non-isolated node to seed an outbreak");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  return candidates[pick(rng)];
}

SpreadTrace si_spread(const LayerGraph& network, std::optional<Node> source, std::uint64_t seed) {
  const Node s = source ? *source : choose_source(network, seed);
  if (s >= network.num_nodes()) throw DataError("source node " + std::to_string(s) + " is out of range");
  SpreadTrace trace;
  trace.source = s;
  trace.num_nodes = network.num_nodes();
  std::vector<char> infected(network.num_nodes(), 0);
  infected[s] = 1;
  std::vector<Node> current{s}, frontier{s};
  trace.infected.push_back(current);
  while (!frontier.empty()) {
    std::vector<Node> next;
    for (Node u : frontier) {
      for (Node v : network.neighbors(u)) {
        if (!infected[v]) {
          infected[v] = 1;
          next.push_back(v);
        }
      }
    }
    if (next.empty()) break;
    current.insert(current.end(), next.begin(), next.end());
    std::sort(current.begin(), current.end());
    trace.infected.push_back(current);
    frontier = std::move(next);
  }
  return trace;
}

CsvTable compare_spreads(std::span<const NamedTrace> traces) {
  CsvTable table({"name", "step", "infected", "fraction", "terminal"});
  if (traces.empty()) return table;
  const std::size_t n = traces.front().trace.num_nodes;
  const Node source = traces.front().trace.source;
  std::size_t steps = 0;
  for (const NamedTrace& t : traces) {
    if (t.trace.num_nodes != n) throw DataError("traces have different node spaces");
    if (t.trace.source != source) throw DataError("traces start from different sources");
    steps = std::max(steps, t.trace.infected.size());
  }
  for (const NamedTrace& t : traces) {
    for (std::size_t step = 0; step < steps; ++step) {
      const std::size_t idx = std::min(step, t.trace.terminal_step());
      const std::size_t count = t.trace.infected[idx].size();
      table.add_row({t.name, std::to_string(step), std::to_string(count),
                     format_double(static_cast<double>(count) / static_cast<double>(n)),
                     step >= t.trace.terminal_step() ? "1" : "0"});
    }
  }
  return table;
}

LayerGraph union_graph(std::span<const LayerGraph> layers) {
  if (layers.empty()) throw DataError("union of zero layers");
  const std::size_t n = layers.front().num_nodes();
  EdgeList all;
  for (const LayerGraph& g : layers) {
    if (g.num_nodes() != n) throw DataError("layers have different node spaces");
    all.insert(all.end(), g.edges().begin(), g.edges().end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return LayerGraph(0, n, std::move(all));
}

CsvTable reconstruction_csv(const ReconstructedNetwork& network) {
  CsvTable table({"u", "v", "provenance"});
  for (std::size_t i = 0; i < network.edges.size(); ++i) {
    table.add_row({std::to_string(network.edges[i].u), std::to_string(network.edges[i].v),
                   network.provenance[i] == Provenance::sampled ? "sampled" : "recovered"});
  }
  return table;
}

}  // namespace mrgnn
