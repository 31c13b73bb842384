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

#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <ostream>

#include "mrgnn/checkpoint.hpp"
#include "mrgnn/community.hpp"
#include "mrgnn/epidemic.hpp"
#include "mrgnn/error.hpp"
#include "mrgnn/evaluation.hpp"
#include "mrgnn/io.hpp"

namespace mrgnn::cli {

namespace {

namespace fs = std::filesystem;

const fs::path& require_out(const ExperimentConfig& c) {
  if (c.out.empty()) throw ConfigError("no output directory: set \"out\" in the config or pass --out");
  return c.out;
}

const std::vector<std::uint64_t>& require_seeds(const ExperimentConfig& c) {
  if (c.seeds.empty()) throw ConfigError("no seeds: set \"seeds\" in the config or pass --seeds");
  return c.seeds;
}

const fs::path& require_checkpoint(const ExperimentConfig& c) {
  if (!c.checkpoint) throw ConfigError("this command needs a checkpoint: set \"checkpoint\" or pass --checkpoint");
  if (!fs::exists(*c.checkpoint)) throw ConfigError("checkpoint not found: " + c.checkpoint->string());
  return *c.checkpoint;
}

void write_resolved(const ExperimentConfig& c) {
  write_file_atomic(require_out(c) / "config.resolved.json", c.resolved().dump(2) + "\n");
}

std::string variant_name(const ModelConfig& m) {
  return to_string(m.aggregator) + (m.fuse_layers ? "" : "-nofuse");
}

std::string fixed(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string fixed(const std::optional<double>& v) { return v ? fixed(*v) : std::string("n/a"); }

/// Recreates the split a checkpoint was trained on.
DataSplit checkpoint_split(const MultiplexGraph& g, const CheckpointInfo& info) {
  if (info.split_kind == "holdout") return split_edges(g, info.test_frac, info.val_frac, info.split_seed);
  if (info.split_kind == "train_fraction") return split_by_train_fraction(g, info.train_frac, info.split_seed);
  throw DataError("checkpoint has unknown split kind \"" + info.split_kind + "\"");
}

void append_rows(CsvTable& into, const CsvTable& from) {
  for (const auto& row : from.rows()) into.add_row(row);
}

CsvTable seed_summary_table(const SeedSummary& s) {
  CsvTable t({"variant", "metric", "mean", "std", "count"});
  auto add = [&](const char* name, const MetricSummary& m) {
    t.add_row({s.variant, name, format_double(m.mean), format_double(m.std), std::to_string(m.count)});
  };
  add("auc", s.auc);
  add("micro_f1", s.micro_f1);
  add("weak_auc", s.weak_auc);
  add("weak_micro_f1", s.weak_micro_f1);
  return t;
}

}  // namespace

ExperimentConfig apply_overrides(ExperimentConfig c, const Overrides& o) {
  if (o.out) c.out = *o.out;
  if (o.seeds) c.seeds = parse_seed_list(*o.seeds);
  if (o.variant) c.model = variant_config(c.model, *o.variant);
  if (o.fixed_source) c.simulate.source = static_cast<Node>(*o.fixed_source);
  if (o.checkpoint) c.checkpoint = *o.checkpoint;
  if (o.kind) c.sweep.kind = *o.kind;
  return c;
}

void cmd_train(const ExperimentConfig& c, std::ostream& log) {
  const fs::path& out = require_out(c);
  const auto& seeds = require_seeds(c);
  const MultiplexGraph g = load_dataset(c.dataset);
  const auto partitions = partition_layers(g, c.split.partition_seed);
  const ModelVariant variant{variant_name(c.model), c.model};
  write_resolved(c);

  const auto runs = run_holdout_seeds(g, variant, c.train, seeds, c.split.test_frac, c.split.val_frac, partitions);

  CsvTable all = runs.front().report.to_csv();
  std::vector<EvaluationReport> reports;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const HoldoutRun& run = runs[i];
    const fs::path dir = out / ("seed_" + std::to_string(run.seed));
    CheckpointInfo info;
    info.dataset = c.dataset.label();
    info.split_kind = run.split.kind;
    info.split_seed = run.seed;
    info.test_frac = c.split.test_frac;
    info.val_frac = c.split.val_frac;
    info.best_epoch = run.result.report.best_epoch;
    save_checkpoint(dir / "checkpoint.json", run.result.params, info);
    run.result.report.to_csv(g.num_layers()).write(dir / "train_report.csv");
    run.report.to_csv().write(dir / "evaluation.csv");
    if (i > 0) append_rows(all, run.report.to_csv());
    reports.push_back(run.report);
    log << "seed " << run.seed << "  auc " << fixed(run.report.macro_auc) << "  micro_f1 "
        << fixed(run.report.macro_micro_f1) << "  weak_auc " << fixed(run.report.macro_weak_auc)
        << "  weak_micro_f1 " << fixed(run.report.macro_weak_micro_f1) << "  best_epoch "
        << run.result.report.best_epoch << "/" << run.result.report.epochs_run << "  ("
        << fixed(run.result.report.wall_seconds, 1) << " s)\n";
  }
  all.write(out / "evaluation.csv");
  const SeedSummary s = summarize(reports);
  seed_summary_table(s).write(out / "summary.csv");
  log << variant.name << " over " << seeds.size() << " seeds: auc " << fixed(s.auc.mean) << " +- "
      << fixed(s.auc.std) << ", micro_f1 " << fixed(s.micro_f1.mean) << " +- " << fixed(s.micro_f1.std)
      << ", weak_auc " << fixed(s.weak_auc.mean) << " +- " << fixed(s.weak_auc.std) << "\n";
}

void cmd_evaluate(const ExperimentConfig& c, bool mean_attention, std::ostream& log) {
  const fs::path& out = require_out(c);
  const Checkpoint ck = load_checkpoint(require_checkpoint(c));
  const MultiplexGraph g = load_dataset(c.dataset);
  const auto partitions = partition_layers(g, c.split.partition_seed);
  const DataSplit split = checkpoint_split(g, ck.info);
  const ModelInput input = make_model_input(g, split);
  MrgnnParams params = ck.params;
  write_resolved(c);

  EvaluationReport report = evaluate(model_scorer(params, input), g, split, partitions);
  report.variant = variant_name(params.config());
  report.to_csv().write(out / "evaluation.csv");
  log << report.variant << "  auc " << fixed(report.macro_auc) << "  micro_f1 " << fixed(report.macro_micro_f1)
      << "  weak_auc " << fixed(report.macro_weak_auc) << "\n";
  if (mean_attention) {
    const AttentionStats stats = attention_stats(params, input);
    EvaluationReport fixed_report = evaluate(mean_attention_scorer(params, input, stats), g, split, partitions);
    fixed_report.variant = report.variant + "-mean-attention";
    fixed_report.to_csv().write(out / "evaluation_mean_attention.csv");
    log << fixed_report.variant << "  auc " << fixed(fixed_report.macro_auc) << "  micro_f1 "
        << fixed(fixed_report.macro_micro_f1) << "  weak_auc " << fixed(fixed_report.macro_weak_auc) << "\n";
  }
}

void cmd_sweep(const ExperimentConfig& c, std::ostream& log) {
  const fs::path& out = require_out(c);
  const auto& seeds = require_seeds(c);
  const SweepSpec& s = c.sweep;
  if (s.kind != "train_size" && s.kind != "embed_dim") {
    throw ConfigError("sweep kind must be train_size or embed_dim (set sweep.kind or pass --kind)");
  }
  std::vector<ModelVariant> variants;
  for (const std::string& name : s.variants) variants.push_back({name, variant_config(c.model, name)});
  if (variants.empty()) variants.push_back({variant_name(c.model), c.model});
  if (s.kind == "train_size" && s.fractions.empty()) throw ConfigError("sweep.fractions is empty");
  if (s.kind == "embed_dim" && s.dims.empty()) throw ConfigError("sweep.dims is empty");

  const MultiplexGraph g = load_dataset(c.dataset);
  const auto partitions = partition_layers(g, c.split.partition_seed);
  write_resolved(c);

  std::vector<SweepRow> rows;
  if (s.kind == "train_size") {
    rows = sweep_training_size(g, s.fractions, variants, c.train, seeds, partitions);
  } else {
    for (const ModelVariant& v : variants) {
      auto part = sweep_embedding_dim(g, s.dims, v, c.train, seeds, c.split.test_frac, c.split.val_frac, partitions);
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  sweep_csv(rows).write(out / ("sweep_" + s.kind + ".csv"));

  // Seed means per grid point, in row order.
  for (std::size_t i = 0; i < rows.size(); i += seeds.size()) {
    double sum = 0.0;
    for (std::size_t k = 0; k < seeds.size(); ++k) sum += rows[i + k].auc;
    log << rows[i].variant << "  "
        << (s.kind == "train_size" ? "fraction " + fixed(rows[i].fraction, 2) : "dim " + std::to_string(rows[i].embed_dim))
        << "  mean auc " << fixed(sum / static_cast<double>(seeds.size())) << "\n";
  }
}

void cmd_simulate(const ExperimentConfig& c, std::ostream& log) {
  const fs::path& out = require_out(c);
  const MultiplexGraph g = load_dataset(c.dataset);
  DataSplit split;
  MrgnnParams params;
  std::uint64_t seed = 0;
  if (c.checkpoint) {
    const Checkpoint ck = load_checkpoint(require_checkpoint(c));
    if (ck.info.split_kind != "train_fraction") {
      throw ConfigError("simulate needs a checkpoint trained on a train_fraction split; " +
                        c.checkpoint->string() + " used a " + ck.info.split_kind + " split");
    }
    seed = ck.info.split_seed;
    split = checkpoint_split(g, ck.info);
    params = ck.params;
  } else {
    seed = require_seeds(c).front();
    split = split_by_train_fraction(g, c.simulate.train_frac, seed);
    ModelConfig mc = c.model;
    mc.init_seed = seed;
    TrainConfig tc = c.train;
    tc.seed = seed;
    tc.early_stopping = false;
    TrainResult trained = train(g, split, mc, tc);
    params = std::move(trained.params);
    CheckpointInfo info;
    info.dataset = c.dataset.label();
    info.split_kind = split.kind;
    info.split_seed = seed;
    info.train_frac = c.simulate.train_frac;
    info.best_epoch = trained.report.best_epoch;
    save_checkpoint(out / "checkpoint.json", params, info);
  }
  if (c.simulate.source && *c.simulate.source >= g.num_nodes()) {
    throw ConfigError("fixed source " + std::to_string(*c.simulate.source) + " is out of range (" +
                      std::to_string(g.num_nodes()) + " nodes)");
  }
  write_resolved(c);

  const ModelInput input = make_model_input(g, split);
  const PairScorer scorer = model_scorer(params, input);
  CsvTable summary({"layer", "source", "base_edges", "recovered_edges", "original_edges", "terminal_base",
                    "terminal_mrgnn", "terminal_original", "steps_base", "steps_mrgnn", "steps_original"});
  std::vector<LayerGraph> bases, recons;
  for (std::size_t r = 0; r < g.num_layers(); ++r) {
    const LayerGraph& original = g.layer(r);
    const EdgeList& base = split.layers[r].train_pos;
    const ReconstructedNetwork rec = reconstruct(
        original, base, [&](Node i, Node j) { return scorer(r, i, j); }, c.simulate.threshold);
    const LayerGraph base_graph(r, g.num_nodes(), base);
    const LayerGraph rec_graph = rec.graph();
    const Node source = c.simulate.source ? *c.simulate.source : choose_source(original, derive_seed(seed, r, 0x51));
    const std::vector<NamedTrace> traces{{"base", si_spread(base_graph, source, 0)},
                                         {"mrgnn", si_spread(rec_graph, source, 0)},
                                         {"original", si_spread(original, source, 0)}};
    const fs::path dir = out / ("layer_" + std::to_string(r));
    write_edge_list(dir / "base_edges.tsv", base_graph.edges());
    reconstruction_csv(rec).write(dir / "reconstruction.csv");
    compare_spreads(traces).write(dir / "spread.csv");
    const double n = static_cast<double>(g.num_nodes());
    auto frac = [n](const SpreadTrace& t) { return format_double(static_cast<double>(t.terminal_size()) / n); };
    summary.add_row({std::to_string(r), std::to_string(source), std::to_string(base.size()),
                     std::to_string(rec.num_recovered()), std::to_string(original.num_edges()),
                     frac(traces[0].trace), frac(traces[1].trace), frac(traces[2].trace),
                     std::to_string(traces[0].trace.terminal_step()), std::to_string(traces[1].trace.terminal_step()),
                     std::to_string(traces[2].trace.terminal_step())});
    log << "layer " << r << "  source " << source << "  recovered " << rec.num_recovered() << " of "
        << original.num_edges() - base.size() << " held-out edges  terminal fraction base "
        << fixed(static_cast<double>(traces[0].trace.terminal_size()) / n) << " mrgnn "
        << fixed(static_cast<double>(traces[1].trace.terminal_size()) / n) << "\n";
    bases.push_back(base_graph);
    recons.push_back(rec_graph);
  }
  summary.write(out / "simulation_summary.csv");

  if (c.simulate.union_layers) {
    // Not a per-layer experiment: one network holding every layer's edges.
    const LayerGraph ub = union_graph(bases), ur = union_graph(recons), uo = union_graph(g.layers());
    const Node source = c.simulate.source ? *c.simulate.source : choose_source(uo, derive_seed(seed, 0x55));
    const std::vector<NamedTrace> traces{{"union_base", si_spread(ub, source, 0)},
                                         {"union_mrgnn", si_spread(ur, source, 0)},
                                         {"union_original", si_spread(uo, source, 0)}};
    compare_spreads(traces).write(out / "union" / "spread.csv");
    log << "union of layers  source " << source << "  terminal size base " << traces[0].trace.terminal_size()
        << " mrgnn " << traces[1].trace.terminal_size() << "\n";
  }
}

void cmd_attention(const ExperimentConfig& c, std::ostream& log) {
  const fs::path& out = require_out(c);
  const Checkpoint ck = load_checkpoint(require_checkpoint(c));
  const MultiplexGraph g = load_dataset(c.dataset);
  const DataSplit split = checkpoint_split(g, ck.info);
  const ModelInput input = make_model_input(g, split);
  MrgnnParams params = ck.params;
  write_resolved(c);
  if (g.num_layers() == 2) {
    log << "warning: with two layers every attention weight is 1; the distribution is degenerate\n";
  }
  const AttentionStats stats = attention_stats(params, input);
  stats.to_csv().write(out / "attention.csv");
  for (const PairAttentionStats& s : stats.pairs) {
    log << "a(" << s.p << "<-" << s.q << ")  mean " << fixed(s.mean) << "  std " << fixed(s.std) << "\n";
  }
  log << "largest asymmetry " << fixed(stats.max_asymmetry()) << "\n";
}

void cmd_generate(const std::string& generator, std::uint64_t seed, const std::string& out_dir,
                  std::ostream& log) {
  if (out_dir.empty()) throw ConfigError("generate needs --out");
  fs::path descriptor;
  if (generator == "ckm_surrogate") {
    descriptor = save_multiplex(ckm_surrogate(seed), out_dir, "ckm_surrogate");
  } else if (generator == "sbm") {
    SbmConfig sc;
    sc.seed = seed;
    const SbmGraph s = correlated_sbm(sc);
    descriptor = save_multiplex(s.graph, out_dir, "sbm");
    CsvTable blocks({"node", "block"});
    for (std::size_t i = 0; i < s.blocks.size(); ++i) blocks.add_row({std::to_string(i), std::to_string(s.blocks[i])});
    blocks.write(fs::path(out_dir) / "blocks.csv");
  } else {
    throw ConfigError("unknown generator \"" + generator + "\" (expected ckm_surrogate or sbm)");
  }
  log << "wrote " << descriptor.string() << "\n";
}

}  // namespace mrgnn::cli
