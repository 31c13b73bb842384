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

#include "mrgnn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "mrgnn/error.hpp"
#include "mrgnn/metrics.hpp"
#include "mrgnn/runtime.hpp"

namespace mrgnn {

namespace {

struct Scored {
  std::vector<double> scores;
  std::vector<int> labels;
};

Scored score_pairs(const PairScorer& scorer, std::size_t layer, const EdgeList& pos,
                   const EdgeList& neg) {
  Scored s;
  for (const Edge& e : pos) {
    s.scores.push_back(scorer(layer, e.u, e.v));
    s.labels.push_back(1);
  }
  for (const Edge& e : neg) {
    s.scores.push_back(scorer(layer, e.u, e.v));
    s.labels.push_back(0);
  }
  return s;
}

std::optional<double> mean_present(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

MetricSummary summary_of(const std::vector<double>& values) {
  MetricSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  for (double v : values) s.std += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(s.std / static_cast<double>(values.size()));
  return s;
}

// Cross-community non-edges not in `exclude`, drawn uniformly.
EdgeList sample_cross_community(const LayerGraph& layer, const CommunityPartition& partition,
                                std::size_t count, const std::unordered_set<Edge, EdgeHash>& exclude,
                                std::uint64_t seed) {
  const std::size_t n = layer.num_nodes();
  EdgeList candidates;
  for (Node a = 0; a < n; ++a) {
    for (Node b = a + 1; b < n; ++b) {
      if (partition.same_community(a, b) || layer.has_edge(a, b)) continue;
      if (exclude.contains(Edge{a, b})) continue;
      candidates.push_back({a, b});
    }
  }
  std::mt19937_64 rng(seed);
  const std::size_t take = std::min(count, candidates.size());
  for (std::size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
    std::swap(candidates[i], candidates[pick(rng)]);
  }
  candidates.resize(take);
  return candidates;
}

}  // namespace

WeakTestSet weak_test_set(const LayerGraph& layer, const LayerSplit& split,
                          const CommunityPartition& partition, std::uint64_t seed) {
  WeakTestSet out;
  for (const Edge& e : split.test_pos) {
    if (is_weak_tie(e, partition)) {
      out.positives.push_back(e);
    } else {
      ++out.strong_pos;
    }
  }
  const std::size_t need = out.positives.size();
  // Sorting first makes the draw independent of the order of test_neg.
  for (const Edge& e : split.test_neg) {
    if (is_weak_tie(e, partition)) out.negatives.push_back(e);
  }
  std::sort(out.negatives.begin(), out.negatives.end());
  if (out.negatives.size() > need) {
    std::mt19937_64 rng(derive_seed(seed, 1));
    for (std::size_t i = 0; i < need; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, out.negatives.size() - 1);
      std::swap(out.negatives[i], out.negatives[pick(rng)]);
    }
    out.negatives.resize(need);
  }
  if (out.negatives.size() < need) {
    std::unordered_set<Edge, EdgeHash> exclude;
    for (const EdgeList* list : {&split.train_neg, &split.val_neg, &split.test_neg}) {
      exclude.insert(list->begin(), list->end());
    }
    EdgeList extra = sample_cross_community(layer, partition, need - out.negatives.size(), exclude, seed);
    out.negatives.insert(out.negatives.end(), extra.begin(), extra.end());
  }
  return out;
}

EvaluationReport evaluate(const PairScorer& scorer, const MultiplexGraph& graph,
                          const DataSplit& split,
                          const std::vector<CommunityPartition>& partitions) {
  if (split.layers.size() != graph.num_layers()) throw DataError("split layer count does not match the graph");
  if (partitions.size() != graph.num_layers()) throw DataError("need one partition per layer");
  EvaluationReport report;
  std::vector<std::optional<double>> weak_auc, weak_f1;
  for (std::size_t r = 0; r < graph.num_layers(); ++r) {
    const LayerSplit& ls = split.layers[r];
    if (ls.test_pos.empty() || ls.test_neg.empty()) {
      throw DataError("layer " + std::to_string(r) + " has an empty test set");
    }
    LayerMetrics m;
    m.layer = r;
    m.test_pos = ls.test_pos.size();
    m.test_neg = ls.test_neg.size();
    const Scored all = score_pairs(scorer, r, ls.test_pos, ls.test_neg);
    m.auc = auc(all.scores, all.labels);
    m.micro_f1 = micro_f1(all.scores, all.labels, 0.5);

    const WeakTestSet weak = weak_test_set(graph.layer(r), ls, partitions[r], derive_seed(split.seed, r, 13));
    m.weak_pos = weak.positives.size();
    m.weak_neg = weak.negatives.size();
    m.strong_pos = weak.strong_pos;
    if (!weak.positives.empty() && !weak.negatives.empty()) {
      const Scored ws = score_pairs(scorer, r, weak.positives, weak.negatives);
      m.weak_auc = auc(ws.scores, ws.labels);
      m.weak_micro_f1 = micro_f1(ws.scores, ws.labels, 0.5);
    }
    weak_auc.push_back(m.weak_auc);
    weak_f1.push_back(m.weak_micro_f1);
    report.macro_auc += m.auc;
    report.macro_micro_f1 += m.micro_f1;
    report.layers.push_back(m);
  }
  const double layers = static_cast<double>(graph.num_layers());
  report.macro_auc /= layers;
  report.macro_micro_f1 /= layers;
  report.macro_weak_auc = mean_present(weak_auc);
  report.macro_weak_micro_f1 = mean_present(weak_f1);
  report.seeds = {split.seed};
  return report;
}

PairScorer model_scorer(MrgnnParams& params, const ModelInput& input) {
  auto emb = std::make_shared<EmbeddingSet>(embed(params, input));
  std::vector<DenseMatrix> mu;
  for (std::size_t r = 0; r < params.num_layers(); ++r) mu.push_back(params.store().value(params.mu(r)));
  const bool literal = params.config().literal_score_sign;
  return [emb, mu = std::move(mu), literal](std::size_t layer, Node i, Node j) {
    return score_link(emb->fused.at(layer), mu.at(layer), i, j, literal);
  };
}

EvaluationReport evaluate(MrgnnParams& params, const MultiplexGraph& graph, const DataSplit& split,
                          const std::vector<CommunityPartition>& partitions) {
  const ModelInput input = make_model_input(graph, split);
  EvaluationReport report = evaluate(model_scorer(params, input), graph, split, partitions);
  report.variant = to_string(params.config().aggregator);
  return report;
}

CsvTable EvaluationReport::to_csv() const {
  CsvTable table({"variant", "seed", "layer", "auc", "micro_f1", "weak_auc", "weak_micro_f1", "test_pos",
                  "test_neg", "weak_pos", "strong_pos", "weak_neg"});
  const std::string seed = seeds.size() == 1 ? std::to_string(seeds.front()) : std::string();
  std::size_t tp = 0, tn = 0, wp = 0, sp = 0, wn = 0;
  for (const LayerMetrics& m : layers) {
    table.add_row({variant, seed, std::to_string(m.layer), format_double(m.auc), format_double(m.micro_f1),
                   format_optional(m.weak_auc), format_optional(m.weak_micro_f1), std::to_string(m.test_pos),
                   std::to_string(m.test_neg), std::to_string(m.weak_pos), std::to_string(m.strong_pos),
                   std::to_string(m.weak_neg)});
    tp += m.test_pos;
    tn += m.test_neg;
    wp += m.weak_pos;
    sp += m.strong_pos;
    wn += m.weak_neg;
  }
  table.add_row({variant, seed, "macro", format_double(macro_auc), format_double(macro_micro_f1),
                 format_optional(macro_weak_auc), format_optional(macro_weak_micro_f1), std::to_string(tp),
                 std::to_string(tn), std::to_string(wp), std::to_string(sp), std::to_string(wn)});
  return table;
}

SeedSummary summarize(const std::vector<EvaluationReport>& runs) {
  SeedSummary s;
  if (!runs.empty()) s.variant = runs.front().variant;
  std::vector<double> a, f, wa, wf;
  for (const EvaluationReport& r : runs) {
    a.push_back(r.macro_auc);
    f.push_back(r.macro_micro_f1);
    if (r.macro_weak_auc) wa.push_back(*r.macro_weak_auc);
    if (r.macro_weak_micro_f1) wf.push_back(*r.macro_weak_micro_f1);
  }
  s.auc = summary_of(a);
  s.micro_f1 = summary_of(f);
  s.weak_auc = summary_of(wa);
  s.weak_micro_f1 = summary_of(wf);
  return s;
}

CsvTable sweep_csv(const std::vector<SweepRow>& rows) {
  CsvTable table({"variant", "fraction", "embed_dim", "seed", "auc", "micro_f1", "weak_auc", "weak_micro_f1"});
  for (const SweepRow& r : rows) {
    table.add_row({r.variant, format_double(r.fraction), std::to_string(r.embed_dim), std::to_string(r.seed),
                   format_double(r.auc), format_double(r.micro_f1), format_optional(r.weak_auc),
                   format_optional(r.weak_micro_f1)});
  }
  return table;
}

HoldoutRun run_holdout(const MultiplexGraph& graph, const ModelVariant& variant,
                       const TrainConfig& train_config, std::uint64_t seed, double test_frac,
                       double val_frac, const std::vector<CommunityPartition>& partitions) {
  HoldoutRun run;
  run.variant = variant.name;
  run.seed = seed;
  run.split = split_edges(graph, test_frac, val_frac, seed);
  ModelConfig mc = variant.config;
  mc.init_seed = seed;
  TrainConfig tc = train_config;
  tc.seed = seed;
  const ModelInput input = make_model_input(graph, run.split);
  run.result = train(input, run.split, mc, tc);
  run.report = evaluate(model_scorer(run.result.params, input), graph, run.split, partitions);
  run.report.variant = variant.name;
  run.report.seeds = {seed};
  return run;
}

std::vector<HoldoutRun> run_holdout_seeds(const MultiplexGraph& graph, const ModelVariant& variant,
                                          const TrainConfig& train_config,
                                          const std::vector<std::uint64_t>& seeds,
                                          double test_frac, double val_frac,
                                          const std::vector<CommunityPartition>& partitions) {
  if (seeds.empty()) throw DataError("no seeds given");
  std::vector<HoldoutRun> runs(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    runs[i] = run_holdout(graph, variant, train_config, seeds[i], test_frac, val_frac, partitions);
  });
  return runs;
}

std::vector<SweepRow> sweep_training_size(const MultiplexGraph& graph,
                                          const std::vector<double>& fractions,
                                          const std::vector<ModelVariant>& variants,
                                          const TrainConfig& train_config,
                                          const std::vector<std::uint64_t>& seeds,
                                          const std::vector<CommunityPartition>& partitions) {
  if (fractions.empty() || variants.empty() || seeds.empty()) throw DataError("sweep grid is empty");
  for (double f : fractions) {
    if (!(f > 0.0 && f < 1.0)) throw DataError("training fractions must lie in (0, 1)");
  }
  const std::size_t per_variant = fractions.size() * seeds.size();
  std::vector<SweepRow> rows(variants.size() * per_variant);
  parallel_for(rows.size(), [&](std::size_t job) {
    const ModelVariant& variant = variants[job / per_variant];
    const double f = fractions[(job % per_variant) / seeds.size()];
    const std::uint64_t seed = seeds[job % seeds.size()];
    const DataSplit split = split_by_train_fraction(graph, f, seed);
    ModelConfig mc = variant.config;
    mc.init_seed = seed;
    TrainConfig tc = train_config;
    tc.seed = seed;
    tc.early_stopping = false;
    const ModelInput input = make_model_input(graph, split);
    TrainResult res = train(input, split, mc, tc);
    const EvaluationReport rep = evaluate(model_scorer(res.params, input), graph, split, partitions);
    rows[job] = {variant.name, f, mc.embed_dim, seed, rep.macro_auc, rep.macro_micro_f1,
                 rep.macro_weak_auc, rep.macro_weak_micro_f1};
  });
  return rows;
}

std::vector<SweepRow> sweep_embedding_dim(const MultiplexGraph& graph,
                                          const std::vector<std::size_t>& dims,
                                          const ModelVariant& base, const TrainConfig& train_config,
                                          const std::vector<std::uint64_t>& seeds,
                                          double test_frac, double val_frac,
                                          const std::vector<CommunityPartition>& partitions) {
  if (dims.empty() || seeds.empty()) throw DataError("sweep grid is empty");
  for (std::size_t d : dims) {
    if (d < 1) throw DataError("embedding dimensions must be >= 1");
  }
  std::vector<SweepRow> rows(dims.size() * seeds.size());
  parallel_for(rows.size(), [&](std::size_t job) {
    const std::size_t d = dims[job / seeds.size()];
    const std::uint64_t seed = seeds[job % seeds.size()];
    ModelVariant variant = base;
    variant.config.embed_dim = d;
    const HoldoutRun run = run_holdout(graph, variant, train_config, seed, test_frac, val_frac, partitions);
    rows[job] = {base.name, 0.0, d, seed, run.report.macro_auc, run.report.macro_micro_f1,
                 run.report.macro_weak_auc, run.report.macro_weak_micro_f1};
  });
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.embed_dim < b.embed_dim;
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Attention analysis

double AttentionStats::mean(std::size_t p, std::size_t q) const {
  for (const auto& s : pairs) {
    if (s.p == p && s.q == q) return s.mean;
  }
  throw std::out_of_range("no attention statistics for that layer pair");
}

double AttentionStats::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t p = 0; p < num_layers; ++p) {
    for (std::size_t q = p + 1; q < num_layers; ++q) worst = std::max(worst, std::abs(mean(p, q) - mean(q, p)));
  }
  return worst;
}

CsvTable AttentionStats::to_csv() const {
  std::vector<std::string> header{"p", "q", "mean", "std"};
  for (std::size_t b = 0; b < 20; ++b) header.push_back((b < 10 ? "bin_0" : "bin_") + std::to_string(b));
  CsvTable table(std::move(header));
  for (const auto& s : pairs) {
    std::vector<std::string> row{std::to_string(s.p), std::to_string(s.q), format_double(s.mean),
                                 format_double(s.std)};
    for (std::size_t c : s.histogram) row.push_back(std::to_string(c));
    table.add_row(std::move(row));
  }
  return table;
}

AttentionStats attention_stats(const AttentionTensor& attention) {
  AttentionStats out;
  out.num_layers = attention.num_layers();
  const std::size_t n = attention.num_nodes();
  for (std::size_t p = 0; p < out.num_layers; ++p) {
    for (std::size_t q = 0; q < out.num_layers; ++q) {
      if (p == q) continue;
      PairAttentionStats s;
      s.p = p;
      s.q = q;
      for (Node i = 0; i < n; ++i) s.mean += attention(i, p, q);
      s.mean /= static_cast<double>(n);
      for (Node i = 0; i < n; ++i) {
        const double a = attention(i, p, q);
        s.std += (a - s.mean) * (a - s.mean);
        const auto bin = std::min<std::size_t>(19, static_cast<std::size_t>(std::floor(std::clamp(a, 0.0, 1.0) * 20.0)));
        ++s.histogram[bin];
      }
      s.std = std::sqrt(s.std / static_cast<double>(n));
      out.pairs.push_back(s);
    }
  }
  return out;
}

AttentionStats attention_stats(MrgnnParams& params, const ModelInput& input) {
  return attention_stats(embed(params, input).attention);
}

double max_normalization_error(const AttentionTensor& attention) {
  double worst = 0.0;
  for (Node i = 0; i < attention.num_nodes(); ++i) {
    for (std::size_t p = 0; p < attention.num_layers(); ++p) {
      double sum = 0.0;
      for (std::size_t q = 0; q < attention.num_layers(); ++q) {
        if (q != p) sum += attention(i, p, q);
      }
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  return worst;
}

double mean_attention_predict(const MrgnnParams& params, const std::vector<DenseMatrix>& intra,
                              const AttentionStats& stats, Node i, Node j, std::size_t p, bool clamp) {
  const bool literal = params.config().literal_score_sign;
  auto layer_prob = [&](std::size_t r) {
    return score_link(intra.at(r), params.store().value(params.mu(r)), i, j, literal);
  };
  double value = layer_prob(p);
  for (std::size_t q = 0; q < params.num_layers(); ++q) {
    if (q != p) value += stats.mean(p, q) * layer_prob(q);
  }
  return clamp ? std::clamp(value, 0.0, 1.0) : value;
}

PairScorer mean_attention_scorer(MrgnnParams& params, const ModelInput& input,
                                 const AttentionStats& stats, bool clamp) {
  auto intra = std::make_shared<std::vector<DenseMatrix>>(embed(params, input).intra);
  const MrgnnParams* p = &params;
  return [p, intra, stats, clamp](std::size_t layer, Node i, Node j) {
    return mean_attention_predict(*p, *intra, stats, i, j, layer, clamp);
  };
}

}  // namespace mrgnn
