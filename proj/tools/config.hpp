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

// Experiment configuration for the mrgnn command-line tool.
//
// One JSON file describes a run end to end. Every key is checked: unknown
// keys are rejected so a typo cannot silently fall back to a default, and
// the fully resolved configuration is written next to the outputs.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrgnn/graph.hpp"
#include "mrgnn/model.hpp"
#include "mrgnn/synthetic.hpp"
#include "mrgnn/training.hpp"

namespace mrgnn::cli {

/// Bad flags, malformed config, or a referenced path that does not exist.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Either a descriptor on disk or a named synthetic generator.
struct DatasetSpec {
  std::filesystem::path descriptor;
  std::string generator;  // "ckm_surrogate" or "sbm"; empty for files
  std::uint64_t generator_seed = 0;
  SbmConfig sbm;

  std::string label() const;
};

struct SplitSpec {
  double test_frac = 0.1;
  double val_frac = 0.1;
  std::uint64_t partition_seed = 0;
};

struct SweepSpec {
  std::string kind;  // "train_size" or "embed_dim"
  std::vector<double> fractions;
  std::vector<std::size_t> dims;
  std::vector<std::string> variants;
};

struct SimulateSpec {
  double train_frac = 0.2;
  double threshold = 0.5;
  std::optional<Node> source;
  bool union_layers = false;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  ModelConfig model;
  TrainConfig train;
  SplitSpec split;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path out;
  std::optional<std::filesystem::path> checkpoint;
  SweepSpec sweep;
  SimulateSpec simulate;

  /// Canonical JSON echo of every field, defaults included.
  nlohmann::ordered_json resolved() const;
};

/// Parses `text`; relative paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// "0,1,5" or ranges such as "0-9" and "0-4,10".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

MultiplexGraph load_dataset(const DatasetSpec& spec);

/// Model config for a variant name: "logit", "semantic", or either with the
/// suffix "-nofuse" for the single-layer ablation.
ModelConfig variant_config(const ModelConfig& base, const std::string& name);

}  // namespace mrgnn::cli
