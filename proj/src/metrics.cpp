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

#include "mrgnn/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "mrgnn/error.hpp"

namespace mrgnn {

namespace {

void require_binary(std::span<const int> labels, const char* op) {
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError(std::string(op) + ": labels must be 0 or 1");
  }
}

}  // namespace

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DataError("auc: scores and labels differ in length");
  require_binary(labels, "auc");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Mann-Whitney U from midranks of tied groups.
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) {
        positive_rank_sum += midrank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) throw DataError("auc: needs at least one positive and one negative");
  const double np = static_cast<double>(positives);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(negatives));
}

double micro_f1(std::span<const double> scores, std::span<const int> labels, double threshold) {
  if (scores.empty()) throw DataError("micro_f1: empty input");
  if (scores.size() != labels.size()) throw DataError("micro_f1: scores and labels differ in length");
  require_binary(labels, "micro_f1");
  // Per class c in {0,1}: tp_c, fp_c, fn_c; micro-F1 pools the counts.
  double tp = 0.0, fp = 0.0, fn = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int predicted = scores[i] >= threshold ? 1 : 0;
    if (predicted == labels[i]) {
      tp += 1.0;
    } else {
      fp += 1.0;
      fn += 1.0;
    }
  }
  const double denom = 2.0 * tp + fp + fn;
  return denom == 0.0 ? 0.0 : 2.0 * tp / denom;
}

}  // namespace mrgnn
