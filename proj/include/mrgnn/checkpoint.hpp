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

#include <cstdint>
#include <filesystem>
#include <string>

#include "mrgnn/model.hpp"

namespace mrgnn {

/// Provenance stored next to the parameters.
struct CheckpointInfo {
  std::string dataset;
  std::string split_kind = "holdout";
  std::uint64_t split_seed = 0;
  double test_frac = 0.0;
  double val_frac = 0.0;
  double train_frac = 0.0;
  std::size_t best_epoch = 0;
};

struct Checkpoint {
  MrgnnParams params;
  CheckpointInfo info;
};

/// Self-describing JSON: format tag, model config, shapes, and every named
/// parameter as nested row arrays. Doubles use shortest round-trip text, so
/// serialize(parse(s)) == s.
std::string serialize_checkpoint(const MrgnnParams& params, const CheckpointInfo& info);
Checkpoint parse_checkpoint(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const MrgnnParams& params,
                     const CheckpointInfo& info);
/// Throws DataError naming the path when it is missing or malformed.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace mrgnn
