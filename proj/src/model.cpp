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

#include "mrgnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mrgnn/error.hpp"

namespace mrgnn {

std::string to_string(Aggregator a) { return a == Aggregator::logit ? "logit" : "semantic"; }

Aggregator parse_aggregator(const std::string& name) {
  if (name == "logit") return Aggregator::logit;
  if (name == "semantic") return Aggregator::semantic;
  throw DataError("unknown aggregator '" + name + "' (expected logit or semantic)");
}

void ModelConfig::validate() const {
  if (embed_dim < 1) throw DataError("embed_dim must be >= 1");
  if (steps < 1) throw DataError("steps must be >= 1");
  if (neighbor_cap < 1) throw DataError("neighbor_cap must be >= 1");
}

// ---------------------------------------------------------------------------
// Parameters

std::vector<std::pair<std::string, std::pair<Eigen::Index, Eigen::Index>>> parameter_schema(
    const ModelConfig& config, std::size_t num_layers, std::size_t feature_width) {
  const auto d = static_cast<Eigen::Index>(config.embed_dim);
  const auto f = static_cast<Eigen::Index>(feature_width);
  std::vector<std::pair<std::string, std::pair<Eigen::Index, Eigen::Index>>> out;
  for (std::size_t r = 0; r < num_layers; ++r) {
    for (std::size_t k = 1; k <= config.steps; ++k) {
      const Eigen::Index d_in = k == 1 ? f : d;
      const std::string tag = std::to_string(r) + "_" + std::to_string(k);
      out.push_back({"W" + tag, {d, d_in}});
      out.push_back({"U" + tag, {1, 2 * d_in}});
    }
  }
  out.push_back({"M", {d, d}});
  out.push_back({"b", {1, d}});
  if (config.aggregator == Aggregator::logit) {
    for (std::size_t r = 0; r < num_layers; ++r) out.push_back({"theta" + std::to_string(r), {1, d}});
  } else {
    for (std::size_t r = 0; r < num_layers; ++r) out.push_back({"V" + std::to_string(r), {d, d}});
    out.push_back({"Q", {d, d}});
  }
  for (std::size_t r = 0; r < num_layers; ++r) out.push_back({"mu" + std::to_string(r), {1, d}});
  return out;
}

MrgnnParams MrgnnParams::init(const ModelConfig& config, std::size_t num_layers,
                              std::size_t feature_width) {
  config.validate();
  if (num_layers < 2) throw DataError("MRGNN needs at least two layers");
  if (feature_width < 1) throw DataError("feature width must be >= 1");
  std::mt19937_64 rng(config.init_seed);
  ParamStore store;
  for (const auto& [name, shape] : parameter_schema(config, num_layers, feature_width)) {
    DenseMatrix value = DenseMatrix::Zero(shape.first, shape.second);
    if (name != "b") {
      const double bound = 1.0 / std::sqrt(static_cast<double>(shape.second));
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (Eigen::Index i = 0; i < value.size(); ++i) value.data()[i] = dist(rng);
    }
    store.add(name, std::move(value));
  }
  return from_store(config, num_layers, feature_width, std::move(store));
}

MrgnnParams MrgnnParams::from_store(const ModelConfig& config, std::size_t num_layers,
                                    std::size_t feature_width, ParamStore store) {
  config.validate();
  const auto schema = parameter_schema(config, num_layers, feature_width);
  if (store.size() != schema.size()) {
    throw DataError("parameter count " + std::to_string(store.size()) + " does not match schema (" +
                    std::to_string(schema.size()) + ")");
  }
  for (const auto& [name, shape] : schema) {
    const auto idx = store.find(name);
    if (!idx) throw DataError("missing parameter '" + name + "'");
    const DenseMatrix& v = store.value(*idx);
    if (v.rows() != shape.first || v.cols() != shape.second) {
      throw DataError("parameter '" + name + "' has shape " + std::to_string(v.rows()) + "x" +
                      std::to_string(v.cols()) + ", expected " + std::to_string(shape.first) + "x" +
                      std::to_string(shape.second));
    }
    if (!v.allFinite()) throw DataError("parameter '" + name + "' has non-finite entries");
  }
  MrgnnParams p;
  p.config_ = config;
  p.num_layers_ = num_layers;
  p.feature_width_ = feature_width;
  p.store_ = std::move(store);
  p.bind();
  return p;
}

void MrgnnParams::bind() {
  w_.assign(num_layers_, {});
  u_.assign(num_layers_, {});
  theta_.clear();
  v_.clear();
  mu_.clear();
  for (std::size_t r = 0; r < num_layers_; ++r) {
    for (std::size_t k = 1; k <= config_.steps; ++k) {
      const std::string tag = std::to_string(r) + "_" + std::to_string(k);
      w_[r].push_back(store_.index("W" + tag));
      u_[r].push_back(store_.index("U" + tag));
    }
    mu_.push_back(store_.index("mu" + std::to_string(r)));
    if (config_.aggregator == Aggregator::logit) {
      theta_.push_back(store_.index("theta" + std::to_string(r)));
    } else {
      v_.push_back(store_.index("V" + std::to_string(r)));
    }
  }
  m_ = store_.index("M");
  b_ = store_.index("b");
  if (config_.aggregator == Aggregator::semantic) q_ = store_.index("Q");
}

// ---------------------------------------------------------------------------
// Inputs

std::size_t ModelInput::feature_width() const {
  return features.empty() ? 0 : static_cast<std::size_t>(features.front()->cols());
}

ModelInput make_model_input(const MultiplexGraph& graph, std::vector<LayerGraph> basis) {
  if (basis.size() != graph.num_layers()) throw DataError("basis layer count mismatch");
  ModelInput in;
  for (const LayerGraph& g : basis) {
    if (g.num_nodes() != graph.num_nodes()) throw DataError("basis node count mismatch");
    in.features.push_back(std::make_shared<const SparseMatrix>(build_node_features_sparse(graph, g)));
  }
  in.basis = std::move(basis);
  return in;
}

ModelInput make_model_input(const MultiplexGraph& graph, const DataSplit& split) {
  std::vector<LayerGraph> basis;
  for (std::size_t r = 0; r < graph.num_layers(); ++r) basis.push_back(training_graph(graph, split, r));
  return make_model_input(graph, std::move(basis));
}

// ---------------------------------------------------------------------------
// Neighbor ranking

namespace {

double sampling_weight(double self_score, double neighbor_score) {
  return std::exp(std::max(0.0, self_score + neighbor_score));
}

void sort_ranked(std::vector<RankedNeighbor>& ranked) {
  std::sort(ranked.begin(), ranked.end(), [](const RankedNeighbor& a, const RankedNeighbor& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.node < b.node;
  });
}

}  // namespace

std::vector<RankedNeighbor> sampling_weights(Node n, std::span<const Node> neighbors,
                                             const DenseMatrix& h_prev, const DenseMatrix& u) {
  const Eigen::Index w = h_prev.cols();
  if (u.rows() != 1 || u.cols() != 2 * w) throw std::invalid_argument("sampling_weights: U shape");
  const double self_score = u.leftCols(w).row(0).dot(h_prev.row(static_cast<Eigen::Index>(n)));
  std::vector<RankedNeighbor> ranked;
  ranked.reserve(neighbors.size());
  for (Node j : neighbors) {
    const double s = u.rightCols(w).row(0).dot(h_prev.row(static_cast<Eigen::Index>(j)));
    ranked.push_back({j, sampling_weight(self_score, s)});
  }
  sort_ranked(ranked);
  return ranked;
}

std::vector<Node> select_neighbors(std::span<const RankedNeighbor> ranked, std::size_t cap) {
  const std::size_t k = std::min(cap, ranked.size());
  std::vector<Node> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].node);
  return out;
}

std::vector<std::vector<std::size_t>> aggregation_groups(const LayerGraph& basis,
                                                         const Eigen::VectorXd& self_score,
                                                         const Eigen::VectorXd& neighbor_score,
                                                         std::size_t cap) {
  const std::size_t n_nodes = basis.num_nodes();
  std::vector<std::vector<std::size_t>> groups(n_nodes);
  std::vector<RankedNeighbor> ranked;
  for (Node n = 0; n < n_nodes; ++n) {
    auto nbrs = basis.neighbors(n);
    auto& g = groups[n];
    g.push_back(n);
    if (nbrs.size() <= cap) {
      g.insert(g.end(), nbrs.begin(), nbrs.end());
      continue;
    }
    ranked.clear();
    const double s = self_score(static_cast<Eigen::Index>(n));
    for (Node j : nbrs) ranked.push_back({j, sampling_weight(s, neighbor_score(static_cast<Eigen::Index>(j)))});
    sort_ranked(ranked);
    for (std::size_t i = 0; i < cap; ++i) g.push_back(ranked[i].node);
  }
  return groups;
}

// ---------------------------------------------------------------------------
// Forward pass

ad::Var propagate_intra(ad::Tape& tape, MrgnnParams& params, const ModelInput& input,
                        std::size_t r) {
  const ModelConfig& cfg = params.config();
  const SparseMatrix& x = *input.features.at(r);
  const LayerGraph& basis = input.basis.at(r);
  ad::Var h;
  for (std::size_t k = 1; k <= cfg.steps; ++k) {
    const DenseMatrix& u = params.store().value(params.U(r, k));
    const Eigen::Index w = u.cols() / 2;
    Eigen::VectorXd self_score, neighbor_score;
    if (k == 1) {
      self_score = x * u.leftCols(w).transpose();
      neighbor_score = x * u.rightCols(w).transpose();
    } else {
      self_score = h.value() * u.leftCols(w).transpose();
      neighbor_score = h.value() * u.rightCols(w).transpose();
    }
    auto groups = std::make_shared<const std::vector<std::vector<std::size_t>>>(
        aggregation_groups(basis, self_score, neighbor_score, cfg.neighbor_cap));
    // MEAN(rows) W^T equals MEAN(rows W^T); mapping first keeps the wide
    // sparse features out of the aggregation.
    ad::Var wk = tape.parameter(params.store(), params.W(r, k));
    ad::Var mapped = k == 1 ? ad::sparse_matmul_nt(x, wk) : ad::matmul_nt(h, wk);
    h = ad::relu(ad::gather_mean(mapped, std::move(groups)));
  }
  return h;
}

ad::Var project_shared(ad::Tape& tape, MrgnnParams& params, const ad::Var& h) {
  ad::Var m = tape.parameter(params.store(), params.M());
  ad::Var b = tape.parameter(params.store(), params.b());
  return ad::tanh(ad::add_row(ad::matmul_nt(h, m), b));
}

ad::Var attention_logit(ad::Tape& tape, MrgnnParams& params, const std::vector<ad::Var>& h,
                        std::size_t p) {
  ad::Var theta = tape.parameter(params.store(), params.theta(p));
  std::vector<ad::Var> scores;
  for (std::size_t q = 0; q < h.size(); ++q) {
    if (q == p) continue;
    scores.push_back(ad::sigmoid(ad::matmul_nt(ad::hadamard(h[p], h[q]), theta)));
  }
  return ad::softmax_rows(ad::concat_cols(scores));
}

namespace {

std::vector<ad::Var> semantic_transforms(ad::Tape& tape, MrgnnParams& params,
                                         const std::vector<ad::Var>& h) {
  std::vector<ad::Var> t;
  for (std::size_t r = 0; r < h.size(); ++r) {
    t.push_back(ad::tanh(ad::matmul_nt(h[r], tape.parameter(params.store(), params.V(r)))));
  }
  return t;
}

ad::Var semantic_scores(ad::Tape& tape, MrgnnParams& params, const std::vector<ad::Var>& transformed,
                        std::size_t p) {
  // Mean over the entries of Q v equals mean_rows(Q) . v.
  ad::Var q_mean = ad::mean_rows(tape.parameter(params.store(), params.Q()));
  std::vector<ad::Var> scores;
  for (std::size_t q = 0; q < transformed.size(); ++q) {
    if (q == p) continue;
    scores.push_back(ad::matmul_nt(ad::add(transformed[p], transformed[q]), q_mean));
  }
  return ad::softmax_rows(ad::concat_cols(scores));
}

}  // namespace

ad::Var attention_semantic(ad::Tape& tape, MrgnnParams& params, const std::vector<ad::Var>& h,
                           std::size_t p) {
  return semantic_scores(tape, params, semantic_transforms(tape, params, h), p);
}

ad::Var fuse(const std::vector<ad::Var>& h, const ad::Var& attention, std::size_t p) {
  ad::Var z = h[p];
  Eigen::Index col = 0;
  for (std::size_t q = 0; q < h.size(); ++q) {
    if (q == p) continue;
    z = ad::add(z, ad::row_scale(h[q], ad::column(attention, col++)));
  }
  return z;
}

ForwardPass forward(ad::Tape& tape, MrgnnParams& params, const ModelInput& input) {
  const std::size_t layers = params.num_layers();
  if (input.num_layers() != layers) throw DataError("model input layer count does not match parameters");
  if (input.feature_width() != params.feature_width()) {
    throw DataError("feature width " + std::to_string(input.feature_width()) +
                    " does not match parameters (" + std::to_string(params.feature_width()) + ")");
  }
  ForwardPass out;
  for (std::size_t r = 0; r < layers; ++r) {
    out.intra.push_back(project_shared(tape, params, propagate_intra(tape, params, input, r)));
  }
  const bool logit = params.config().aggregator == Aggregator::logit;
  std::vector<ad::Var> transformed;
  if (!logit) transformed = semantic_transforms(tape, params, out.intra);
  for (std::size_t p = 0; p < layers; ++p) {
    out.attention.push_back(logit ? attention_logit(tape, params, out.intra, p)
                                  : semantic_scores(tape, params, transformed, p));
    out.fused.push_back(params.config().fuse_layers ? fuse(out.intra, out.attention.back(), p)
                                                    : out.intra[p]);
  }
  return out;
}

ad::Var score_links(ad::Tape& tape, MrgnnParams& params, const ad::Var& z, std::size_t r,
                    std::span<const Edge> pairs) {
  std::vector<std::size_t> left, right;
  left.reserve(pairs.size());
  right.reserve(pairs.size());
  for (const Edge& e : pairs) {
    left.push_back(e.u);
    right.push_back(e.v);
  }
  ad::Var mu = tape.parameter(params.store(), params.mu(r));
  ad::Var logits = ad::pair_bilinear(z, mu, left, right);
  if (params.config().literal_score_sign) logits = ad::scale(logits, -1.0);
  return ad::sigmoid(logits);
}

double score_link(const DenseMatrix& z, const DenseMatrix& mu, Node i, Node j, bool literal_sign) {
  const auto zi = z.row(static_cast<Eigen::Index>(i));
  const auto zj = z.row(static_cast<Eigen::Index>(j));
  const double x = mu.row(0).dot(zi.cwiseProduct(zj));
  return ad::sigmoid(literal_sign ? -x : x);
}

// ---------------------------------------------------------------------------
// Value-level embeddings

AttentionTensor::AttentionTensor(std::size_t num_nodes, std::size_t num_layers)
    : nodes_(num_nodes), layers_(num_layers), data_(num_nodes * num_layers * num_layers, 0.0) {}

EmbeddingSet embed(MrgnnParams& params, const ModelInput& input) {
  ad::Tape tape;
  ForwardPass fp = forward(tape, params, input);
  EmbeddingSet out;
  const std::size_t layers = params.num_layers();
  const std::size_t n = input.num_nodes();
  out.attention = AttentionTensor(n, layers);
  for (std::size_t p = 0; p < layers; ++p) {
    out.intra.push_back(fp.intra[p].value());
    out.fused.push_back(fp.fused[p].value());
    const DenseMatrix& a = fp.attention[p].value();
    Eigen::Index col = 0;
    for (std::size_t q = 0; q < layers; ++q) {
      if (q == p) continue;
      for (Node i = 0; i < n; ++i) out.attention(i, p, q) = a(static_cast<Eigen::Index>(i), col);
      ++col;
    }
  }
  return out;
}

}  // namespace mrgnn
