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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace mrgnn::cli {

/// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::string> seeds;
  std::optional<std::string> variant;
  std::optional<std::size_t> fixed_source;
  std::optional<std::string> checkpoint;
  std::optional<std::string> kind;
};

ExperimentConfig apply_overrides(ExperimentConfig config, const Overrides& o);

/// Each command writes its artifacts under config.out and a short summary
/// to `log`. Errors propagate as exceptions; main() maps them to exit codes.
void cmd_train(const ExperimentConfig& config, std::ostream& log);
void cmd_evaluate(const ExperimentConfig& config, bool mean_attention, std::ostream& log);
void cmd_sweep(const ExperimentConfig& config, std::ostream& log);
void cmd_simulate(const ExperimentConfig& config, std::ostream& log);
void cmd_attention(const ExperimentConfig& config, std::ostream& log);

/// Writes a synthetic dataset in the loader's descriptor format.
void cmd_generate(const std::string& generator, std::uint64_t seed, const std::string& out_dir,
                  std::ostream& log);

}  // namespace mrgnn::cli
