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

// Acceptance harness: one PASS/FAIL line per criterion with the measured
// values. Protocol constants are fixed here, before any run, and printed
// with the results.
//
// Exit status is 0 when every selected criterion was evaluated (whatever
// its verdict) and 3 when the harness itself failed. With --strict any FAIL
// also yields exit status 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "mrgnn/checkpoint.hpp"
#include "mrgnn/community.hpp"
#include "mrgnn/epidemic.hpp"
#include "mrgnn/evaluation.hpp"
#include "mrgnn/metrics.hpp"
#include "mrgnn/runtime.hpp"
#include "mrgnn/synthetic.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace mrgnn;

namespace {

// Physician-network protocol: 10% test, 10% validation, lr 0.7, d = 128,
// neighbor cap 10, two propagation steps, ten seeds. The loss sits on a
// plateau for roughly 600 epochs before descending, and validation AUC dips
// during it, so patience must outlast the plateau.
constexpr double kTestFrac = 0.1;
constexpr double kValFrac = 0.1;
constexpr std::size_t kCkmEpochs = 2000;
constexpr std::size_t kCkmPatience = 1000;
constexpr std::size_t kSeeds = 10;

// Block-model protocol: same split and optimizer; the unfused ablation
// leaves its plateau only after about 4000 epochs, so both arms get 6000
// epochs and the best validation snapshot.
constexpr std::size_t kSbmEpochs = 6000;

// Reconstruction protocol: train on 20% of each layer, no validation.
constexpr double kReconTrainFrac = 0.2;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

struct Verdicts {
  std::map<int, bool> pass;

  void report(int id, bool ok, const std::string& text) {
    pass[id] = ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << text << std::endl;
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(pass.begin(), pass.end(), [](const auto& p) { return !p.second; }));
  }
};

void progress(const std::string& what) { std::cerr << "[acceptance] " << what << std::endl; }

std::vector<std::uint64_t> seed_list(std::size_t n) {
  std::vector<std::uint64_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  return s;
}

ModelVariant variant(Aggregator agg, std::size_t dim = 128, bool fuse = true) {
  ModelVariant v;
  v.config.aggregator = agg;
  v.config.embed_dim = dim;
  v.config.fuse_layers = fuse;
  v.name = to_string(agg) + (fuse ? "" : "-nofuse");
  return v;
}

TrainConfig ckm_train() {
  TrainConfig t;
  t.max_epochs = kCkmEpochs;
  t.patience = kCkmPatience;
  return t;
}

TrainConfig sbm_train() {
  TrainConfig t;
  t.max_epochs = kSbmEpochs;
  t.patience = kSbmEpochs;
  return t;
}

double mean_of(const std::vector<HoldoutRun>& runs, const std::function<double(const HoldoutRun&)>& f) {
  double s = 0.0;
  for (const HoldoutRun& r : runs) s += f(r);
  return s / static_cast<double>(runs.size());
}

double weak_of(const HoldoutRun& r) {
  if (!r.report.macro_weak_auc) throw std::runtime_error("run without weak-tie test edges");
  return *r.report.macro_weak_auc;
}

/// Everything a run produces that must repeat exactly.
std::string fingerprint(const HoldoutRun& r) {
  return r.report.to_csv().str() + r.result.report.to_csv(r.split.layers.size()).str() +
         serialize_checkpoint(r.result.params, {});
}

// ---------------------------------------------------------------------------

void criterion_gradients(Verdicts& v) {
  const auto t0 = Clock::now();
  const MultiplexGraph g = fixtures::toy_multiplex(12, 3, 11);
  const DataSplit split = split_edges(g, 0.1, 0.1, 11);
  const ModelInput in = make_model_input(g, split);
  double worst = 0.0;
  std::string detail;
  for (Aggregator agg : {Aggregator::logit, Aggregator::semantic}) {
    ModelConfig c;
    c.embed_dim = 8;
    c.steps = 2;
    c.aggregator = agg;
    c.init_seed = 5;
    MrgnnParams p = MrgnnParams::init(c, 3, in.feature_width());
    // Checked away from the init saddle, where attention gradients are
    // ~1e-9 and below central-difference roundoff.
    for (std::size_t i = 0; i < p.store().size(); ++i) p.store().value(i) *= 3.0;
    const ad::LossBuilder build = [&](ad::Tape& tape, ParamStore&) {
      ForwardPass fp = forward(tape, p, in);
      return compute_loss(tape, p, fp.fused, split);
    };
    const ad::GradCheckResult r = ad::grad_check(build, p.store(), 1e-5);
    worst = std::max(worst, r.max_relative_error);
    detail += " " + to_string(agg) + " " + sci(r.max_relative_error) + " over " + std::to_string(r.entries_checked) +
              " entries;";
  }
  const double wall = seconds_since(t0);
  v.report(1, worst <= 1e-4 && wall < 30.0,
           "grad check (12 nodes, 3 layers, d=8, K=2, eps 1e-5):" + detail + " limit 1e-4, " + fmt(wall, 2) +
               " s (limit 30 s)");
}

void criterion_auc_oracle(Verdicts& v) {
  std::mt19937_64 rng(20240);
  double worst = 0.0;
  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 50)(rng);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = instance % 2 ? static_cast<double>(rng() % 5) : std::uniform_real_distribution<double>(0, 1)(rng);
      y[i] = static_cast<int>(rng() % 2);
    }
    y[0] = 1;
    y[1] = 0;
    worst = std::max(worst, std::abs(auc(s, y) - oracle::concordance_auc(s, y)));
  }
  v.report(2, worst <= 1e-12, "AUC vs brute-force concordance on 200 instances: max |diff| " + sci(worst) +
                                  " (limit 1e-12)");
}

struct CkmRuns {
  std::vector<HoldoutRun> logit, semantic, semantic_d16;
  double wall_main = 0.0;
};

void criterion_ckm(Verdicts& v, const CkmRuns& runs, const std::string& label) {
  std::string text = label + ", " + std::to_string(kSeeds) + " seeds, " + std::to_string(kCkmEpochs) +
                     " epochs max, patience " + std::to_string(kCkmPatience) + ":";
  bool ok = false;
  for (const auto* rs : {&runs.logit, &runs.semantic}) {
    const double overall = mean_of(*rs, [](const HoldoutRun& r) { return r.report.macro_auc; });
    const double weak = mean_of(*rs, weak_of);
    const double f1 = mean_of(*rs, [](const HoldoutRun& r) { return r.report.macro_micro_f1; });
    ok = ok || (overall >= 0.90 && weak >= 0.85);
    text += " " + rs->front().variant + " auc " + fmt(overall) + " weak " + fmt(weak) + " micro_f1 " + fmt(f1) + ";";
  }
  text += " need auc >= 0.90 and weak >= 0.85 for one variant; training wall " + fmt(runs.wall_main, 1) +
          " s (limit 600 s)";
  v.report(3, ok && runs.wall_main < 600.0, text);
}

void criterion_inter_layer(Verdicts& v, const std::vector<HoldoutRun>& fused,
                           const std::vector<HoldoutRun>& ablation) {
  const double wf = mean_of(fused, weak_of), wa = mean_of(ablation, weak_of);
  std::string per_seed;
  for (std::size_t i = 0; i < fused.size(); ++i) per_seed += " " + fmt(weak_of(fused[i]) - weak_of(ablation[i]), 3);
  v.report(4, wf - wa >= 0.03,
           "correlated SBM (300 nodes, 4 blocks, 2 layers), " + std::to_string(fused.size()) +
               " seeds: weak AUC fused " + fmt(wf) + " vs ablation " + fmt(wa) + ", gain " + fmt(wf - wa) +
               " (need >= 0.03); per-seed gains" + per_seed);
}

struct AttentionSummary {
  double worst_normalization = 0.0;
  std::vector<std::pair<std::string, double>> asymmetry;  // seed-0 model per variant
  double max_asymmetry_all = 0.0;
  std::string csv;
};

AttentionSummary analyze_attention(const MultiplexGraph& g, const CkmRuns& runs) {
  AttentionSummary out;
  for (const auto* rs : {&runs.logit, &runs.semantic}) {
    for (std::size_t i = 0; i < rs->size(); ++i) {
      const HoldoutRun& r = (*rs)[i];
      MrgnnParams params = r.result.params;
      const ModelInput input = make_model_input(g, r.split);
      const EmbeddingSet e = embed(params, input);
      out.worst_normalization = std::max(out.worst_normalization, max_normalization_error(e.attention));
      const AttentionStats s = attention_stats(e.attention);
      out.max_asymmetry_all = std::max(out.max_asymmetry_all, s.max_asymmetry());
      if (i == 0) {
        out.asymmetry.emplace_back(r.variant, s.max_asymmetry());
        out.csv += s.to_csv().str();
      }
    }
  }
  return out;
}

void criterion_attention(Verdicts& v, const AttentionSummary& a) {
  bool asym = false;
  std::string text = "max |sum_q a - 1| over all nodes, layers and " + std::to_string(2 * kSeeds) + " models " +
                     sci(a.worst_normalization) + " (limit 1e-6); largest |mean(p<-q) - mean(q<-p)| of the seed-0 analysis:";
  for (const auto& [name, value] : a.asymmetry) {
    asym = asym || value > 0.02;
    text += " " + name + " " + fmt(value);
  }
  text += " (need > 0.02); largest over all models " + fmt(a.max_asymmetry_all);
  v.report(5, a.worst_normalization <= 1e-6 && asym, text);
}

void criterion_dimension(Verdicts& v, const CkmRuns& runs) {
  const double d128 = mean_of(runs.semantic, [](const HoldoutRun& r) { return r.report.macro_auc; });
  const double d16 = mean_of(runs.semantic_d16, [](const HoldoutRun& r) { return r.report.macro_auc; });
  v.report(6, std::abs(d16 - d128) <= 0.02,
           "semantic mean AUC d=16 " + fmt(d16) + " vs d=128 " + fmt(d128) + ", |diff| " + fmt(std::abs(d16 - d128)) +
               " (limit 0.02)");
}

struct Reconstruction {
  std::vector<ReconstructedNetwork> layers;
  std::vector<std::string> spread_csv;
  std::vector<double> base_fraction, recon_fraction;
  bool nested = true;
};

bool nested_at_every_step(const SpreadTrace& small, const SpreadTrace& big) {
  const std::size_t steps = std::max(small.infected.size(), big.infected.size());
  for (std::size_t t = 0; t < steps; ++t) {
    const auto& a = small.infected[std::min(t, small.terminal_step())];
    const auto& b = big.infected[std::min(t, big.terminal_step())];
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) return false;
  }
  return true;
}

Reconstruction reconstruct_ckm(const MultiplexGraph& g, std::uint64_t seed) {
  const DataSplit split = split_by_train_fraction(g, kReconTrainFrac, seed);
  ModelConfig mc;
  mc.aggregator = Aggregator::semantic;
  mc.init_seed = seed;
  TrainConfig tc = ckm_train();
  tc.seed = seed;
  tc.early_stopping = false;
  const ModelInput input = make_model_input(g, split);
  TrainResult trained = train(input, split, mc, tc);
  const PairScorer scorer = model_scorer(trained.params, input);
  Reconstruction out;
  for (std::size_t r = 0; r < g.num_layers(); ++r) {
    const EdgeList& base = split.layers[r].train_pos;
    ReconstructedNetwork rec = reconstruct(g.layer(r), base, [&](Node i, Node j) { return scorer(r, i, j); });
    const Node source = choose_source(g.layer(r), derive_seed(seed, r, 0x51));
    const SpreadTrace tb = si_spread(LayerGraph(r, g.num_nodes(), base), source, 0);
    const SpreadTrace tr = si_spread(rec.graph(), source, 0);
    out.nested = out.nested && nested_at_every_step(tb, tr);
    const double n = static_cast<double>(g.num_nodes());
    out.base_fraction.push_back(static_cast<double>(tb.terminal_size()) / n);
    out.recon_fraction.push_back(static_cast<double>(tr.terminal_size()) / n);
    const std::vector<NamedTrace> traces{{"base", tb}, {"mrgnn", tr}};
    out.spread_csv.push_back(compare_spreads(traces).str() + reconstruction_csv(rec).str());
    out.layers.push_back(std::move(rec));
  }
  return out;
}

void criterion_spreading(Verdicts& v, const Reconstruction& rec) {
  // Terminal set against an independent union-find component.
  std::mt19937_64 rng(707);
  std::size_t component_mismatch = 0, nesting_violations = 0;
  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 50)(rng);
    const double p = std::uniform_real_distribution<double>(0.0, 4.0 / static_cast<double>(n))(rng);
    const fixtures::PairList pairs = fixtures::random_pairs(n, p, n, rng());
    const Node src = rng() % n;
    const SpreadTrace t = si_spread(fixtures::layer_from(n, pairs), src, 0);
    if (t.infected.back() != oracle::component_of(n, pairs, src)) ++component_mismatch;

    fixtures::PairList sub;
    for (const auto& e : pairs) {
      if (rng() % 3 != 0) sub.push_back(e);
    }
    const SpreadTrace ts = si_spread(fixtures::layer_from(n, sub), src, 0);
    if (!nested_at_every_step(ts, t)) ++nesting_violations;
  }
  bool dominance = true;
  std::string fractions;
  for (std::size_t r = 0; r < rec.layers.size(); ++r) {
    dominance = dominance && rec.recon_fraction[r] >= rec.base_fraction[r];
    fractions += " layer " + std::to_string(r) + " base " + fmt(rec.base_fraction[r], 3) + " -> mrgnn " +
                 fmt(rec.recon_fraction[r], 3) + " (+" + std::to_string(rec.layers[r].num_recovered()) + " edges)" +
                 (r + 1 < rec.layers.size() ? ";" : "");
  }
  v.report(7, component_mismatch == 0 && nesting_violations == 0 && rec.nested && dominance,
           "terminal set != component on " + std::to_string(component_mismatch) + "/100 graphs; nesting violations " +
               std::to_string(nesting_violations) + "/100 random pairs, CKM base/reconstruction nested " +
               (rec.nested ? "yes" : "no") + "; terminal infected fraction" + fractions);
}

void criterion_descent(Verdicts& v, const MultiplexGraph& g) {
  bool ok = true;
  std::string worst;
  double smallest_drop = std::numeric_limits<double>::infinity();
  const auto seeds = seed_list(kSeeds);
  for (Aggregator agg : {Aggregator::logit, Aggregator::semantic}) {
    std::vector<TrainReport> reports(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
      const DataSplit split = split_edges(g, kTestFrac, kValFrac, seeds[i]);
      ModelConfig mc;
      mc.aggregator = agg;
      mc.init_seed = seeds[i];
      TrainConfig tc;
      tc.max_epochs = 50;
      tc.early_stopping = false;
      tc.seed = seeds[i];
      reports[i] = train(g, split, mc, tc).report;
    });
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const double drop = reports[i].initial_loss - reports[i].final_loss;
      ok = ok && drop > 0.0;
      if (drop < smallest_drop) {
        smallest_drop = drop;
        worst = to_string(agg) + " seed " + std::to_string(seeds[i]) + ": " + fmt(reports[i].initial_loss, 9) +
                " -> " + fmt(reports[i].final_loss, 9);
      }
    }
  }
  v.report(8, ok, "loss after 50 epochs below initial for all " + std::to_string(2 * kSeeds) +
                      " runs; smallest drop " + sci(smallest_drop) + " (" + worst + ")");
}

}  // namespace

int main(int argc, char** argv) {
  tune_allocator();
  CLI::App app{"MRGNN acceptance criteria"};
  std::string ckm_descriptor;
  std::string only;
  bool strict = false;
  bool ckm_from_env = false;
  std::size_t threads = 0;
  app.add_option("--ckm", ckm_descriptor, "Physician-network descriptor; the synthetic surrogate otherwise");
  app.add_option("--only", only, "Comma-separated criteria to run, e.g. 1,2,8");
  app.add_option("--threads", threads, "Worker threads for seed-parallel runs (default: MRGNN_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--ckm-from-env", ckm_from_env, "Read the descriptor path from MRGNN_CKM_DESCRIPTOR; exit 77 if unset");
  app.add_flag("--strict", strict, "Exit with status 1 when any criterion fails");
  CLI11_PARSE(app, argc, argv);
  if (ckm_from_env) {
    const char* env = std::getenv("MRGNN_CKM_DESCRIPTOR");
    if (env == nullptr || *env == '\0') {
      std::cout << "MRGNN_CKM_DESCRIPTOR is not set; skipping" << std::endl;
      return 77;
    }
    ckm_descriptor = env;
  }

  if (threads > 0) setenv("MRGNN_THREADS", std::to_string(threads).c_str(), 1);
  threads = worker_count();

  std::set<int> selected;
  if (only.empty()) {
    for (int i = 1; i <= 9; ++i) selected.insert(i);
  } else {
    std::stringstream ss(only);
    for (std::string item; std::getline(ss, item, ',');) selected.insert(std::stoi(item));
  }
  auto want = [&](std::initializer_list<int> ids) {
    return std::any_of(ids.begin(), ids.end(), [&](int i) { return selected.contains(i); });
  };

  Verdicts v;
  try {
    const auto t_all = Clock::now();
    std::cout << "protocol: split " << kTestFrac << "/" << kValFrac << ", lr 0.7, d 128, cap 10, K 2, seeds 0-"
              << kSeeds - 1 << ", physician network " << kCkmEpochs << " epochs / patience " << kCkmPatience
              << ", block model " << kSbmEpochs << " epochs, " << threads << " threads" << std::endl;
    if (want({1})) criterion_gradients(v);
    if (want({2})) criterion_auc_oracle(v);

    MultiplexGraph ckm;
    std::string label;
    if (want({3, 5, 6, 7, 8, 9})) {
      if (ckm_descriptor.empty()) {
        ckm = ckm_surrogate(0);
        label = "synthetic physician-network surrogate";
      } else {
        ckm = load_multiplex(ckm_descriptor);
        label = "physician network " + ckm_descriptor;
      }
    }
    const auto partitions = want({3, 5, 6, 9}) ? partition_layers(ckm, 0) : std::vector<CommunityPartition>{};
    const auto seeds = seed_list(kSeeds);

    CkmRuns runs;
    if (want({3, 5, 6, 9})) {
      progress("training logit and semantic models on " + label);
      const auto t0 = Clock::now();
      runs.logit = run_holdout_seeds(ckm, variant(Aggregator::logit), ckm_train(), seeds, kTestFrac, kValFrac, partitions);
      runs.semantic =
          run_holdout_seeds(ckm, variant(Aggregator::semantic), ckm_train(), seeds, kTestFrac, kValFrac, partitions);
      runs.wall_main = seconds_since(t0);
    }
    if (want({3})) criterion_ckm(v, runs, label);

    std::vector<HoldoutRun> sbm_fused, sbm_ablation;
    auto sbm_runs = [&](bool fuse, const std::vector<std::uint64_t>& s, std::size_t nthreads) {
      std::vector<HoldoutRun> out(s.size());
      parallel_for(
          s.size(),
          [&](std::size_t i) {
            SbmConfig sc;
            sc.seed = s[i];
            const MultiplexGraph g = correlated_sbm(sc).graph;
            out[i] = run_holdout(g, variant(Aggregator::semantic, 128, fuse), sbm_train(), s[i], kTestFrac, kValFrac,
                                 partition_layers(g, 0));
          },
          nthreads);
      return out;
    };
    if (want({4, 9})) {
      progress("training fused and unfused models on the correlated block model");
      sbm_fused = sbm_runs(true, seeds, threads);
      sbm_ablation = sbm_runs(false, seeds, threads);
    }
    if (want({4})) criterion_inter_layer(v, sbm_fused, sbm_ablation);

    AttentionSummary attention;
    if (want({5, 9})) attention = analyze_attention(ckm, runs);
    if (want({5})) criterion_attention(v, attention);

    if (want({6, 9})) {
      progress("training d=16 semantic models");
      runs.semantic_d16 =
          run_holdout_seeds(ckm, variant(Aggregator::semantic, 16), ckm_train(), seeds, kTestFrac, kValFrac, partitions);
    }
    if (want({6})) criterion_dimension(v, runs);

    Reconstruction rec;
    if (want({7, 9})) {
      progress("training on 20% of links and reconstructing");
      rec = reconstruct_ckm(ckm, 0);
    }
    if (want({7})) criterion_spreading(v, rec);
    if (want({8})) criterion_descent(v, ckm);

    if (want({9})) {
      // Repeats seeds 0 and 1 of every trained experiment on one thread and
      // compares every reported number and parameter bit for bit.
      progress("repeating experiments for the determinism check");
      setenv("MRGNN_THREADS", "1", 1);
      const std::vector<std::uint64_t> repeat{0, 1};
      std::size_t compared = 0, mismatched = 0;
      auto compare = [&](const std::string& a, const std::string& b) {
        ++compared;
        if (a != b) ++mismatched;
      };
      CkmRuns again;
      again.logit = run_holdout_seeds(ckm, variant(Aggregator::logit), ckm_train(), repeat, kTestFrac, kValFrac, partitions);
      again.semantic =
          run_holdout_seeds(ckm, variant(Aggregator::semantic), ckm_train(), repeat, kTestFrac, kValFrac, partitions);
      again.semantic_d16 =
          run_holdout_seeds(ckm, variant(Aggregator::semantic, 16), ckm_train(), repeat, kTestFrac, kValFrac, partitions);
      for (std::size_t i = 0; i < repeat.size(); ++i) {
        compare(fingerprint(runs.logit[i]), fingerprint(again.logit[i]));
        compare(fingerprint(runs.semantic[i]), fingerprint(again.semantic[i]));
        compare(fingerprint(runs.semantic_d16[i]), fingerprint(again.semantic_d16[i]));
      }
      // The attention analysis reads the seed-0 models.
      const AttentionSummary attention_again = analyze_attention(ckm, again);
      compare(attention.csv, attention_again.csv);
      const auto fused_again = sbm_runs(true, repeat, 1);
      const auto ablation_again = sbm_runs(false, repeat, 1);
      for (std::size_t i = 0; i < repeat.size(); ++i) {
        compare(fingerprint(sbm_fused[i]), fingerprint(fused_again[i]));
        compare(fingerprint(sbm_ablation[i]), fingerprint(ablation_again[i]));
      }
      const Reconstruction rec_again = reconstruct_ckm(ckm, 0);
      for (std::size_t r = 0; r < rec.spread_csv.size(); ++r) compare(rec.spread_csv[r], rec_again.spread_csv[r]);
      v.report(9, mismatched == 0,
               std::to_string(compared - mismatched) + "/" + std::to_string(compared) +
                   " repeated artifacts identical (seeds 0-1 of criteria 3-6 on one thread, full criterion 7 "
                   "pipeline)");
    }
    std::cout << "total wall " << fmt(seconds_since(t_all), 1) << " s; " << v.failures() << " of " << v.pass.size()
              << " criteria failed" << std::endl;
  } catch (const std::exception& e) {
    std::cout << "harness error: " << e.what() << std::endl;
    return 3;
  }
  return strict && v.failures() > 0 ? 1 : 0;
}
