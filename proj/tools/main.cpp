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

// mrgnn: train, evaluate and analyze multiplex link-prediction models.
//
// Exit status: 0 success, 1 usage or configuration error, 2 runtime or
// numeric failure.

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mrgnn/error.hpp"
#include "mrgnn/runtime.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

struct CommonFlags {
  std::string config;
  mrgnn::cli::Overrides overrides;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool seeds, bool checkpoint) {
  cmd->add_option("--config", f.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", f.overrides.out, "Output directory (overrides \"out\")");
  cmd->add_option("--variant", f.overrides.variant, "logit, semantic, or <name>-nofuse");
  if (seeds) cmd->add_option("--seeds", f.overrides.seeds, "Seed list such as 0-9 or 1,4,7");
  if (checkpoint) cmd->add_option("--checkpoint", f.overrides.checkpoint, "Trained checkpoint (JSON)");
}

}  // namespace

int main(int argc, char** argv) {
  mrgnn::tune_allocator();
  CLI::App app{"Multiplex link prediction with inter-layer attention"};
  app.require_subcommand(1);

  CommonFlags flags;
  bool mean_attention = false;
  std::string generator = "ckm_surrogate";
  std::uint64_t generator_seed = 0;
  std::string generate_out;

  CLI::App* train = app.add_subcommand("train", "Train and evaluate one model per seed");
  add_common(train, flags, true, false);
  CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpoint on its test split");
  add_common(evaluate, flags, false, true);
  evaluate->add_flag("--mean-attention", mean_attention, "Also score with the fixed mean-attention predictor");
  CLI::App* sweep = app.add_subcommand("sweep", "Training-size or embedding-dimension sweep");
  add_common(sweep, flags, true, false);
  sweep->add_option("--kind", flags.overrides.kind, "train_size or embed_dim")
      ->check(CLI::IsMember({"train_size", "embed_dim"}));
  CLI::App* simulate = app.add_subcommand("simulate", "Reconstruct layers and run SI spreading");
  add_common(simulate, flags, true, true);
  simulate->add_option("--fixed-source", flags.overrides.fixed_source, "Outbreak source node for every trace");
  CLI::App* attention = app.add_subcommand("attention", "Inter-layer attention distributions of a checkpoint");
  add_common(attention, flags, false, true);
  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic dataset in descriptor format");
  generate->add_option("--generator", generator, "ckm_surrogate or sbm")->check(CLI::IsMember({"ckm_surrogate", "sbm"}));
  generate->add_option("--seed", generator_seed, "Generator seed");
  generate->add_option("--out", generate_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (generate->parsed()) {
      mrgnn::cli::cmd_generate(generator, generator_seed, generate_out, std::cout);
      return 0;
    }
    const mrgnn::cli::ExperimentConfig config =
        mrgnn::cli::apply_overrides(mrgnn::cli::load_config(flags.config), flags.overrides);
    if (train->parsed()) mrgnn::cli::cmd_train(config, std::cout);
    if (evaluate->parsed()) mrgnn::cli::cmd_evaluate(config, mean_attention, std::cout);
    if (sweep->parsed()) mrgnn::cli::cmd_sweep(config, std::cout);
    if (simulate->parsed()) mrgnn::cli::cmd_simulate(config, std::cout);
    if (attention->parsed()) mrgnn::cli::cmd_attention(config, std::cout);
  } catch (const mrgnn::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return 0;
}
