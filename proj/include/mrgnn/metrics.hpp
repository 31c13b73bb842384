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

#include <span>

namespace mrgnn {

/// Probability that a random positive outscores a random negative, ties
/// counted as one half. Labels are 0 or 1. Throws DataError when either
/// class is missing or the lengths differ.
double auc(std::span<const double> scores, std::span<const int> labels);

/// F1 micro-averaged over both classes with predictions score >= threshold.
/// Throws DataError on empty input.
double micro_f1(std::span<const double> scores, std::span<const int> labels,
                double threshold = 0.5);

}  // namespace mrgnn
