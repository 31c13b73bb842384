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

// Matrix-level reverse-mode differentiation.
//
// A Tape records every primitive application together with a closure that
// pushes the output gradient back to its inputs. Leaves are either constants
// or parameters bound to a ParamStore slot; backward() sweeps the tape in
// reverse recording order and accumulates parameter gradients into the store.

#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mrgnn/tensor.hpp"

namespace mrgnn {

/// Named parameter matrices, each with a gradient accumulator of equal shape.
class ParamStore {
 public:
  std::size_t add(std::string name, DenseMatrix value);

  std::size_t size() const { return entries_.size(); }
  const std::string& name(std::size_t i) const { return entries_.at(i).name; }
  DenseMatrix& value(std::size_t i) { return entries_.at(i).value; }
  const DenseMatrix& value(std::size_t i) const { return entries_.at(i).value; }
  DenseMatrix& grad(std::size_t i) { return entries_.at(i).grad; }
  const DenseMatrix& grad(std::size_t i) const { return entries_.at(i).grad; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws std::out_of_range for unknown names.
  std::size_t index(std::string_view name) const;

  void zero_grad();
  std::size_t num_scalars() const;

 private:
  struct Entry {
    std::string name;
    DenseMatrix value;
    DenseMatrix grad;
  };
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

namespace ad {

class Tape;

/// Handle to a recorded value. Cheap to copy; valid while its Tape lives.
class Var {
 public:
  Var() = default;

  const DenseMatrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  /// Scalar value of a 1x1 node.
  double scalar() const;

  std::size_t id() const { return id_; }
  Tape* tape() const { return tape_; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(DenseMatrix value);
  /// Leaf whose gradient is added to `store.grad(index)` by backward().
  Var parameter(ParamStore& store, std::size_t index);

  /// Reverse sweep from a 1x1 `loss` recorded on this tape.
  void backward(const Var& loss);

  std::size_t size() const { return nodes_.size(); }
  const DenseMatrix& value(std::size_t id) const { return nodes_.at(id).value; }
  /// Gradient buffer of a node after backward(); empty if none reached it.
  const DenseMatrix& grad(const Var& v) const { return nodes_.at(v.id()).grad; }

  // Primitive plumbing.
  Var record(DenseMatrix value, bool needs_grad, BackwardFn backward, std::string_view op);
  bool needs_grad(std::size_t id) const { return nodes_[id].needs_grad; }
  /// Gradient accumulator of node `id`, zero-initialized on first access.
  DenseMatrix& grad_buffer(std::size_t id);
  /// Adds `expr` to the gradient of node `id`; the first contribution is
  /// assigned directly. `expr` must not read that node's own gradient.
  template <typename Expr>
  void accumulate(std::size_t id, const Expr& expr) {
    DenseMatrix& g = nodes_[id].grad;
    if (g.size() == 0) {
      g.noalias() = expr;
    } else {
      g.noalias() += expr;
    }
  }
  const DenseMatrix& output_grad(std::size_t id) const { return nodes_[id].grad; }

 private:
  struct Node {
    DenseMatrix value;
    DenseMatrix grad;
    BackwardFn backward;
    bool needs_grad = false;
    ParamStore* store = nullptr;
    std::size_t param_index = 0;
  };
  std::deque<Node> nodes_;
};

// Primitive family. Shapes are checked; any non-finite result throws
// NumericError naming the primitive.

Var matmul(const Var& a, const Var& b);
/// a * b^T
Var matmul_nt(const Var& a, const Var& b);
/// x * w^T for a constant sparse x. `x` must outlive the tape.
Var sparse_matmul_nt(const SparseMatrix& x, const Var& w);
Var add(const Var& a, const Var& b);
/// a + broadcast of row vector b over all rows of a.
Var add_row(const Var& a, const Var& b);
Var hadamard(const Var& a, const Var& b);
Var scale(const Var& a, double s);
Var concat_cols(std::span<const Var> parts);
Var concat_rows(std::span<const Var> parts);
/// 1 x cols mean over rows.
Var mean_rows(const Var& a);
/// rows x 1 mean over columns.
Var mean_cols(const Var& a);
/// 1 x 1 mean over all entries.
Var mean_all(const Var& a);
Var relu(const Var& a);
Var tanh(const Var& a);
Var sigmoid(const Var& a);
Var exp(const Var& a);
/// Softmax applied independently to each row (max-subtracted).
Var softmax_rows(const Var& a);
/// 1 x 1 sum of the entrywise product of equally shaped a and b.
Var dot(const Var& a, const Var& b);
Var gather_rows(const Var& a, std::span<const std::size_t> rows);
/// Output row i is the mean of the rows of `a` listed in groups[i].
Var gather_mean(const Var& a, std::shared_ptr<const std::vector<std::vector<std::size_t>>> groups);
/// Column of bilinear pair scores: out(k) = sum_d w(0, d) z(left[k], d) z(right[k], d).
/// Equal to matmul_nt(hadamard(gather_rows(z, left), gather_rows(z, right)), w)
/// without materializing the gathered rows.
Var pair_bilinear(const Var& z, const Var& w, std::span<const std::size_t> left,
                  std::span<const std::size_t> right);
/// Scales row i of x by s(i, 0).
Var row_scale(const Var& x, const Var& s);
Var column(const Var& a, Eigen::Index j);
/// -mean(y log p + (1 - y) log(1 - p)) with p clamped to [clamp, 1 - clamp].
Var binary_cross_entropy(const Var& p, std::span<const double> labels, double clamp = 1e-12);

double sigmoid(double x);

/// Result of comparing tape gradients with central finite differences.
struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_entry = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t entries_checked = 0;
};

using LossBuilder = std::function<Var(Tape&, ParamStore&)>;

/// For every parameter entry compares the tape gradient with
/// (L(p+eps) - L(p-eps)) / 2eps; relative error uses the denominator
/// max(|analytic|, |numeric|, 1e-8). epsilon must lie in [1e-7, 1e-3].
/// Throws DataError if two evaluations at the same point disagree.
GradCheckResult grad_check(const LossBuilder& build, ParamStore& params, double epsilon);

}  // namespace ad
}  // namespace mrgnn
