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

#include "mrgnn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "mrgnn/error.hpp"
#include "mrgnn/io.hpp"

namespace mrgnn {

namespace {

using json = nlohmann::json;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::size_t holdout_count(double frac, std::size_t total) {
  // Guard against 0.8 * 100 = 80.00000000000001 style representation error.
  return static_cast<std::size_t>(std::floor(frac * static_cast<double>(total) + 1e-9));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

// ---------------------------------------------------------------------------
// LayerGraph

LayerGraph::LayerGraph(std::size_t layer_id, std::size_t num_nodes, EdgeList edges)
    : id_(layer_id), num_nodes_(num_nodes), edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.u >= e.v) {
      throw DataError("layer " + std::to_string(layer_id) + ": edge (" + std::to_string(e.u) + "," +
                      std::to_string(e.v) + ") is not canonical or is a self-loop");
    }
    if (e.v >= num_nodes) {
      throw DataError("layer " + std::to_string(layer_id) + ": node index " + std::to_string(e.v) +
                      " out of range (num_nodes=" + std::to_string(num_nodes) + ")");
    }
    if (i > 0 && edges_[i - 1] == e) {
      throw DataError("layer " + std::to_string(layer_id) + ": duplicate edge (" +
                      std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
  }
  std::vector<std::size_t> degree(num_nodes, 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(num_nodes + 1, 0);
  for (std::size_t n = 0; n < num_nodes; ++n) offsets_[n + 1] = offsets_[n] + degree[n];
  targets_.assign(offsets_.back(), 0);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    targets_[cursor[e.u]++] = e.v;
    targets_[cursor[e.v]++] = e.u;
  }
  for (std::size_t n = 0; n < num_nodes; ++n) {
    std::sort(targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[n]),
              targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[n + 1]));
  }
}

LayerGraph LayerGraph::from_pairs(std::size_t layer_id, std::size_t num_nodes,
                                  std::span<const std::pair<Node, Node>> pairs,
                                  std::size_t* dropped) {
  EdgeList edges;
  edges.reserve(pairs.size());
  std::size_t skipped = 0;
  for (auto [a, b] : pairs) {
    if (a >= num_nodes || b >= num_nodes) {
      throw DataError("layer " + std::to_string(layer_id) + ": node index " +
                      std::to_string(std::max(a, b)) + " out of range (num_nodes=" +
                      std::to_string(num_nodes) + ")");
    }
    if (a == b) {
      ++skipped;
      continue;
    }
    edges.push_back(canonical(a, b));
  }
  std::sort(edges.begin(), edges.end());
  auto last = std::unique(edges.begin(), edges.end());
  skipped += static_cast<std::size_t>(edges.end() - last);
  edges.erase(last, edges.end());
  if (dropped) *dropped = skipped;
  return LayerGraph(layer_id, num_nodes, std::move(edges));
}

bool LayerGraph::has_edge(Node a, Node b) const {
  if (a >= num_nodes_ || b >= num_nodes_ || a == b) return false;
  auto nbrs = neighbors(a);
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

// ---------------------------------------------------------------------------
// MultiplexGraph

MultiplexGraph::MultiplexGraph(std::size_t num_nodes, std::vector<LayerGraph> layers,
                               DenseMatrix attributes)
    : num_nodes_(num_nodes), layers_(std::move(layers)), attributes_(std::move(attributes)) {
  if (layers_.size() < 2) throw DataError("a multiplex graph needs at least two layers");
  for (std::size_t r = 0; r < layers_.size(); ++r) {
    if (layers_[r].num_nodes() != num_nodes_) {
      throw DataError("layer " + std::to_string(r) + " has a different node count");
    }
  }
  if (attributes_.size() == 0) attributes_.resize(static_cast<Eigen::Index>(num_nodes_), 0);
  if (static_cast<std::size_t>(attributes_.rows()) != num_nodes_) {
    throw DataError("attribute row count " + std::to_string(attributes_.rows()) +
                    " != num_nodes " + std::to_string(num_nodes_));
  }
  if (!attributes_.allFinite()) throw DataError("attributes contain non-finite values");
  for (std::size_t r = 0; r < layers_.size(); ++r) layer_names_.push_back("layer" + std::to_string(r + 1));
}

void MultiplexGraph::set_layer_names(std::vector<std::string> names) {
  if (names.size() != layers_.size()) throw DataError("layer name count mismatch");
  layer_names_ = std::move(names);
}

std::size_t LoadWarnings::total() const {
  return std::accumulate(dropped_edges.begin(), dropped_edges.end(), std::size_t{0});
}

// ---------------------------------------------------------------------------
// File formats

std::vector<std::pair<Node, Node>> read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list: " + path.string());
  std::vector<std::pair<Node, Node>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    long long a = -1, b = -1;
    std::string rest;
    if (!(ss >> a >> b) || a < 0 || b < 0 || (ss >> rest)) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected \"u<TAB>v\", got \"" +
                      line + "\"");
    }
    pairs.emplace_back(static_cast<Node>(a), static_cast<Node>(b));
  }
  return pairs;
}

void write_edge_list(const std::filesystem::path& path, const EdgeList& edges) {
  std::string out;
  for (const Edge& e : edges) out += std::to_string(e.u) + '\t' + std::to_string(e.v) + '\n';
  write_file_atomic(path, out);
}

namespace {

DenseMatrix read_attributes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open attribute file: " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        std::string t = trim(cell);
        row.push_back(std::stod(t, &used));
        if (used != t.size()) throw std::invalid_argument(t);
      } catch (const std::exception&) {
        throw DataError(path.string() + ":" + std::to_string(lineno) + ": bad number \"" + cell + "\"");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": ragged attribute row");
    }
    rows.push_back(std::move(row));
  }
  const auto cols = rows.empty() ? 0 : rows.front().size();
  DenseMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

}  // namespace

MultiplexGraph load_multiplex(const std::filesystem::path& descriptor, LoadWarnings* warnings) {
  if (!std::filesystem::exists(descriptor)) {
    throw DataError("dataset descriptor not found: " + descriptor.string());
  }
  json doc;
  try {
    doc = json::parse(read_file(descriptor));
  } catch (const json::exception& e) {
    throw DataError("cannot parse dataset descriptor " + descriptor.string() + ": " + e.what());
  }
  const auto base = descriptor.parent_path();
  auto resolve = [&base](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
  };
  if (!doc.contains("num_nodes") || !doc["num_nodes"].is_number_unsigned()) {
    throw DataError(descriptor.string() + ": missing non-negative integer \"num_nodes\"");
  }
  if (!doc.contains("layers") || !doc["layers"].is_array()) {
    throw DataError(descriptor.string() + ": missing \"layers\" array");
  }
  const auto num_nodes = doc["num_nodes"].get<std::size_t>();

  std::vector<LayerGraph> layers;
  std::vector<std::string> names;
  LoadWarnings local;
  for (const auto& entry : doc["layers"]) {
    std::string path, name;
    if (entry.is_string()) {
      path = entry.get<std::string>();
      name = std::filesystem::path(path).stem().string();
    } else if (entry.is_object() && entry.contains("path")) {
      path = entry["path"].get<std::string>();
      name = entry.value("name", std::filesystem::path(path).stem().string());
    } else {
      throw DataError(descriptor.string() + ": each layer must be a path or {\"path\": ...}");
    }
    const auto file = resolve(path);
    if (!std::filesystem::exists(file)) throw DataError("edge list not found: " + file.string());
    auto pairs = read_edge_list(file);
    std::size_t dropped = 0;
    layers.push_back(LayerGraph::from_pairs(layers.size(), num_nodes, pairs, &dropped));
    local.dropped_edges.push_back(dropped);
    names.push_back(name);
  }

  DenseMatrix attributes;
  if (doc.contains("attributes") && !doc["attributes"].is_null()) {
    const auto file = resolve(doc["attributes"].get<std::string>());
    if (!std::filesystem::exists(file)) throw DataError("attribute file not found: " + file.string());
    attributes = read_attributes(file);
    if (static_cast<std::size_t>(attributes.rows()) != num_nodes) {
      throw DataError("attribute row count " + std::to_string(attributes.rows()) + " != num_nodes " +
                      std::to_string(num_nodes) + " in " + file.string());
    }
  }
  MultiplexGraph graph(num_nodes, std::move(layers), std::move(attributes));
  graph.set_layer_names(std::move(names));
  if (warnings) *warnings = std::move(local);
  return graph;
}

std::filesystem::path save_multiplex(const MultiplexGraph& graph, const std::filesystem::path& dir,
                                     const std::string& name) {
  std::filesystem::create_directories(dir);
  json doc;
  doc["name"] = name;
  doc["num_nodes"] = graph.num_nodes();
  doc["layers"] = json::array();
  for (std::size_t r = 0; r < graph.num_layers(); ++r) {
    const std::string file = name + "_layer" + std::to_string(r + 1) + ".tsv";
    write_edge_list(dir / file, graph.layer(r).edges());
    doc["layers"].push_back({{"name", graph.layer_names()[r]}, {"path", file}});
  }
  if (graph.attribute_width() > 0) {
    std::string out;
    const auto& x = graph.attributes();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        if (j) out += ',';
        out += format_double(x(i, j));
      }
      out += '\n';
    }
    const std::string file = name + "_attributes.csv";
    write_file_atomic(dir / file, out);
    doc["attributes"] = file;
  } else {
    doc["attributes"] = nullptr;
  }
  const auto path = dir / (name + ".json");
  write_file_atomic(path, doc.dump(2) + "\n");
  return path;
}

// ---------------------------------------------------------------------------
// Features

DenseMatrix build_node_features(const MultiplexGraph& graph, const LayerGraph& basis) {
  const auto n = static_cast<Eigen::Index>(graph.num_nodes());
  const auto d0 = static_cast<Eigen::Index>(graph.attribute_width());
  DenseMatrix x = DenseMatrix::Zero(n, d0 + n);
  if (d0 > 0) x.leftCols(d0) = graph.attributes();
  for (const Edge& e : basis.edges()) {
    x(static_cast<Eigen::Index>(e.u), d0 + static_cast<Eigen::Index>(e.v)) = 1.0;
    x(static_cast<Eigen::Index>(e.v), d0 + static_cast<Eigen::Index>(e.u)) = 1.0;
  }
  return x;
}

SparseMatrix build_node_features_sparse(const MultiplexGraph& graph, const LayerGraph& basis) {
  const auto n = static_cast<Eigen::Index>(graph.num_nodes());
  const auto d0 = static_cast<Eigen::Index>(graph.attribute_width());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(n * d0) + 2 * basis.num_edges());
  const auto& attrs = graph.attributes();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d0; ++j)
      if (attrs(i, j) != 0.0) entries.emplace_back(i, j, attrs(i, j));
  for (const Edge& e : basis.edges()) {
    entries.emplace_back(static_cast<Eigen::Index>(e.u), d0 + static_cast<Eigen::Index>(e.v), 1.0);
    entries.emplace_back(static_cast<Eigen::Index>(e.v), d0 + static_cast<Eigen::Index>(e.u), 1.0);
  }
  SparseMatrix x(n, d0 + n);
  x.setFromTriplets(entries.begin(), entries.end());
  return x;
}

// ---------------------------------------------------------------------------
// Negative sampling and splits

EdgeList sample_negatives(const LayerGraph& layer, std::size_t count, std::span<const Edge> exclude,
                          std::uint64_t seed) {
  const std::size_t n = layer.num_nodes();
  const std::size_t total_pairs = n < 2 ? 0 : n * (n - 1) / 2;
  std::unordered_set<Edge, EdgeHash> blocked;
  blocked.reserve(exclude.size() * 2 + 16);
  for (const Edge& e : exclude) {
    const Edge c = canonical(e.u, e.v);
    if (c.u != c.v && c.v < n && !layer.has_edge(c.u, c.v)) blocked.insert(c);
  }
  const std::size_t available = total_pairs - layer.num_edges() - blocked.size();
  if (count > available) {
    throw DataError("layer " + std::to_string(layer.id()) + ": cannot sample " + std::to_string(count) +
                    " negatives, only " + std::to_string(available) + " non-edges available");
  }
  EdgeList out;
  out.reserve(count);
  if (count == 0) return out;
  std::mt19937_64 rng(seed);

  if (available <= 4 * count) {
    // Dense regime: enumerate candidates and take a uniform prefix.
    EdgeList candidates;
    candidates.reserve(available);
    for (Node u = 0; u < n; ++u)
      for (Node v = u + 1; v < n; ++v)
        if (!layer.has_edge(u, v) && !blocked.contains(Edge{u, v})) candidates.push_back({u, v});
    for (std::size_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
      std::swap(candidates[i], candidates[pick(rng)]);
    }
    candidates.resize(count);
    return candidates;
  }

  std::uniform_int_distribution<Node> node(0, n - 1);
  std::unordered_set<Edge, EdgeHash> chosen;
  chosen.reserve(count * 2);
  while (out.size() < count) {
    const Node a = node(rng), b = node(rng);
    if (a == b) continue;
    const Edge c = canonical(a, b);
    if (layer.has_edge(c.u, c.v) || blocked.contains(c) || chosen.contains(c)) continue;
    chosen.insert(c);
    out.push_back(c);
  }
  return out;
}

namespace {

void fill_negatives(const LayerGraph& layer, LayerSplit& s, std::uint64_t seed) {
  EdgeList taken;
  s.test_neg = sample_negatives(layer, s.test_pos.size(), taken, derive_seed(seed, 1));
  taken.insert(taken.end(), s.test_neg.begin(), s.test_neg.end());
  s.val_neg = sample_negatives(layer, s.val_pos.size(), taken, derive_seed(seed, 2));
  taken.insert(taken.end(), s.val_neg.begin(), s.val_neg.end());
  s.train_neg = sample_negatives(layer, s.train_pos.size(), taken, derive_seed(seed, 3));
}

EdgeList shuffled_edges(const LayerGraph& layer, std::uint64_t seed) {
  EdgeList edges = layer.edges();
  std::mt19937_64 rng(seed);
  std::shuffle(edges.begin(), edges.end(), rng);
  return edges;
}

}  // namespace

DataSplit split_edges(const MultiplexGraph& graph, double test_frac, double val_frac, std::uint64_t seed) {
  if (!(test_frac > 0.0 && val_frac > 0.0 && test_frac + val_frac < 1.0)) {
    throw DataError("split fractions must satisfy 0 < test_frac, val_frac and test_frac + val_frac < 1");
  }
  DataSplit split;
  split.seed = seed;
  split.kind = "holdout";
  split.test_frac = test_frac;
  split.val_frac = val_frac;
  for (std::size_t r = 0; r < graph.num_layers(); ++r) {
    const LayerGraph& layer = graph.layer(r);
    if (layer.num_edges() < 10) {
      throw DataError("layer " + std::to_string(r) + " has " + std::to_string(layer.num_edges()) +
                      " edges; at least 10 are required to split");
    }
    const auto layer_seed = derive_seed(seed, r);
    EdgeList edges = shuffled_edges(layer, layer_seed);
    const std::size_t n_test = holdout_count(test_frac, edges.size());
    const std::size_t n_val = holdout_count(val_frac, edges.size() - n_test);
    if (n_test == 0 || n_val == 0 || n_test + n_val >= edges.size()) {
      throw DataError("layer " + std::to_string(r) + " too small for the requested split");
    }
    LayerSplit s;
    auto it = edges.begin();
    s.test_pos.assign(it, it + static_cast<std::ptrdiff_t>(n_test));
    it += static_cast<std::ptrdiff_t>(n_test);
    s.val_pos.assign(it, it + static_cast<std::ptrdiff_t>(n_val));
    it += static_cast<std::ptrdiff_t>(n_val);
    s.train_pos.assign(it, edges.end());
    fill_negatives(layer, s, layer_seed);
    split.layers.push_back(std::move(s));
  }
  return split;
}

DataSplit split_by_train_fraction(const MultiplexGraph& graph, double train_frac, std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw DataError("train fraction must lie in (0, 1)");
  DataSplit split;
  split.seed = seed;
  split.kind = "train_fraction";
  split.train_frac = train_frac;
  for (std::size_t r = 0; r < graph.num_layers(); ++r) {
    const LayerGraph& layer = graph.layer(r);
    const auto layer_seed = derive_seed(seed, r, 7);
    EdgeList edges = shuffled_edges(layer, layer_seed);
    const std::size_t n_test = holdout_count(1.0 - train_frac, edges.size());
    if (n_test == 0 || n_test >= edges.size()) {
      throw DataError("layer " + std::to_string(r) + " (" + std::to_string(edges.size()) +
                      " edges): train fraction " + format_double(train_frac) +
                      " leaves an empty train or test set");
    }
    LayerSplit s;
    s.test_pos.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(n_test));
    s.train_pos.assign(edges.begin() + static_cast<std::ptrdiff_t>(n_test), edges.end());
    fill_negatives(layer, s, layer_seed);
    split.layers.push_back(std::move(s));
  }
  return split;
}

LayerGraph training_graph(const MultiplexGraph& graph, const DataSplit& split, std::size_t layer) {
  return LayerGraph(layer, graph.num_nodes(), split.layers.at(layer).train_pos);
}

LayerGraph union_of_layers(const MultiplexGraph& graph) {
  std::vector<std::pair<Node, Node>> pairs;
  for (const auto& layer : graph.layers())
    for (const Edge& e : layer.edges()) pairs.emplace_back(e.u, e.v);
  return LayerGraph::from_pairs(graph.num_layers(), graph.num_nodes(), pairs);
}

}  // namespace mrgnn
