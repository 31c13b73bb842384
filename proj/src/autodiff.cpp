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

#include "mrgnn/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>

#include "mrgnn/error.hpp"

namespace mrgnn {

// ---------------------------------------------------------------------------
// ParamStore

std::size_t ParamStore::add(std::string name, DenseMatrix value) {
  if (by_name_.contains(name)) throw std::invalid_argument("duplicate parameter name: " + name);
  const std::size_t i = entries_.size();
  by_name_.emplace(name, i);
  DenseMatrix grad = DenseMatrix::Zero(value.rows(), value.cols());
  entries_.push_back({std::move(name), std::move(value), std::move(grad)});
  return i;
}

std::optional<std::size_t> ParamStore::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t ParamStore::index(std::string_view name) const {
  auto i = find(name);
  if (!i) throw std::out_of_range("unknown parameter: " + std::string(name));
  return *i;
}

void ParamStore::zero_grad() {
  for (auto& e : entries_) e.grad.setZero(e.value.rows(), e.value.cols());
}

std::size_t ParamStore::num_scalars() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += static_cast<std::size_t>(e.value.size());
  return n;
}

namespace ad {

// ---------------------------------------------------------------------------
// Tape

const DenseMatrix& Var::value() const {
  if (!tape_) throw std::logic_error("Var is not bound to a tape");
  return tape_->value(id_);
}

double Var::scalar() const {
  const auto& v = value();
  if (v.rows() != 1 || v.cols() != 1) throw std::logic_error("Var::scalar on a non-1x1 value");
  return v(0, 0);
}

Var Tape::constant(DenseMatrix value) { return record(std::move(value), false, nullptr, "constant"); }

Var Tape::parameter(ParamStore& store, std::size_t index) {
  Var v = record(store.value(index), true, nullptr, "parameter");
  nodes_.back().store = &store;
  nodes_.back().param_index = index;
  return v;
}

Var Tape::record(DenseMatrix value, bool needs_grad, BackwardFn backward, std::string_view op) {
  // Any NaN or infinite entry makes the sum non-finite.
  if (!std::isfinite(value.sum())) {
    throw NumericError("non-finite result in primitive '" + std::string(op) + "'");
  }
  Node node;
  node.value = std::move(value);
  node.needs_grad = needs_grad;
  if (needs_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

DenseMatrix& Tape::grad_buffer(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.size() == 0 && n.value.size() != 0) n.grad.setZero(n.value.rows(), n.value.cols());
  return n.grad;
}

void Tape::backward(const Var& loss) {
  if (loss.tape() != this || loss.id() >= nodes_.size()) {
    throw std::invalid_argument("backward: loss is not recorded on this tape");
  }
  const auto& lv = nodes_[loss.id()].value;
  if (lv.rows() != 1 || lv.cols() != 1) throw std::invalid_argument("backward: loss must be 1x1");
  for (auto& n : nodes_) n.grad.resize(0, 0);
  grad_buffer(loss.id())(0, 0) = 1.0;
  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.needs_grad || n.grad.size() == 0) continue;
    if (n.backward) {
      n.backward(*this, id);
    } else if (n.store) {
      n.store->grad(n.param_index) += n.grad;
    }
  }
}

// ---------------------------------------------------------------------------
// Primitives

namespace {

// `what` is either a message or a callable producing one, so that shape
// descriptions are only formatted on failure.
template <typename Msg>
void require(bool ok, std::string_view op, Msg&& what) {
  if (ok) return;
  if constexpr (std::is_invocable_v<Msg>) {
    throw std::invalid_argument(std::string(op) + ": " + std::string(what()));
  } else {
    throw std::invalid_argument(std::string(op) + ": " + std::string(what));
  }
}

std::string shape(const Var& v) { return std::to_string(v.rows()) + "x" + std::to_string(v.cols()); }

Tape& same_tape(const Var& a, const Var& b, std::string_view op) {
  require(a.tape() != nullptr && a.tape() == b.tape(), op, "operands live on different tapes");
  return *a.tape();
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Var matmul(const Var& a, const Var& b) {
  Tape& t = same_tape(a, b, "matmul");
  require(a.cols() == b.rows(), "matmul", [&] { return shape(a) + " * " + shape(b); });
  const std::size_t ia = a.id(), ib = b.id();
  DenseMatrix out = a.value() * b.value();
  return t.record(std::move(out), t.needs_grad(ia) || t.needs_grad(ib),
                  [ia, ib](Tape& tp, std::size_t self) {
                    const DenseMatrix& g = tp.output_grad(self);
                    if (tp.needs_grad(ia)) tp.accumulate(ia, g * tp.value(ib).transpose());
                    if (tp.needs_grad(ib)) tp.accumulate(ib, tp.value(ia).transpose() * g);
                  },
                  "matmul");
}

Var matmul_nt(const Var& a, const Var& b) {
  Tape& t = same_tape(a, b, "matmul_nt");
  require(a.cols() == b.cols(), "matmul_nt", [&] { return shape(a) + " * (" + shape(b) + ")^T"; });
  const std::size_t ia = a.id(), ib = b.id();
  DenseMatrix out = a.value() * b.value().transpose();
  return t.record(std::move(out), t.needs_grad(ia) || t.needs_grad(ib),
                  [ia, ib](Tape& tp, std::size_t self) {
                    const DenseMatrix& g = tp.output_grad(self);
                    if (tp.needs_grad(ia)) tp.accumulate(ia, g * tp.value(ib));
                    if (tp.needs_grad(ib)) tp.accumulate(ib, g.transpose() * tp.value(ia));
                  },
                  "matmul_nt");
}

Var sparse_matmul_nt(const SparseMatrix& x, const Var& w) {
  Tape& t = *w.tape();
  require(x.cols() == w.cols(), "sparse_matmul_nt", [&] { return "sparse cols " + std::to_string(x.cols()) + " vs " + shape(w); });
  const std::size_t iw = w.id();
  const SparseMatrix* px = &x;
  // A row-major copy of w^T keeps the rows read per sparse entry contiguous.
  const DenseMatrix wt = w.value().transpose();
  DenseMatrix out = x * wt;
  return t.record(std::move(out), t.needs_grad(iw),
                  [iw, px](Tape& tp, std::size_t self) {
                    const DenseMatrix& g = tp.output_grad(self);
                    tp.accumulate(iw, g.transpose() * (*px));
                  },
                  "sparse_matmul_nt");
}

Var add(const Var& a, const Var& b) {
  Tape& t = same_tape(a, b, "add");
  require(a.rows() == b.rows() && a.cols() == b.cols(), "add", [&] { return shape(a) + " + " + shape(b); });
  const std::size_t ia = a.id(), ib = b.id();
  DenseMatrix out = a.value() + b.value();
  return t.record(std::move(out), t.needs_grad(ia) || t.needs_grad(ib),
                  [ia, ib](Tape& tp, std::size_t self) {
                    const DenseMatrix& g = tp.output_grad(self);
                    if (tp.needs_grad(ia)) tp.accumulate(ia, g);
                    if (tp.needs_grad(ib)) tp.accumulate(ib, g);
                  },
                  "add");
}

Var add_row(const Var& a, const Var& b) {
  Tape& t = same_tape(a, b, "add_row");
  require(b.rows() == 1 && b.cols() == a.cols(), "add_row", [&] { return shape(a) + " + row " + shape(b); });
  const std::size_t ia = a.id(), ib = b.id();
  DenseMatrix out = a.value().rowwise() + b.value().row(0);
  return t.record(std::move(out), t.needs_grad(ia) || t.needs_grad(ib),
                  [ia, ib](Tape& tp, std::size_t self) {
                    const DenseMatrix& g = tp.output_grad(self);
                    if (tp.needs_grad(ia)) tp.accumulate(ia, g);
                    if (tp.needs_grad(ib)) tp.accumulate(ib, g.colwise().sum());
                  },
                  "add_row");
}

Var hadamard(const Var& a, const Var& b) {
  Tape& t = same_tape(a, b, "hadamard");
  require(a.rows() == b.rows() && a.cols() == b.cols(), "hadamard", [&] { return shape(a) + " (.) " + shape(b); });
  const std::size_t ia = a.id(), ib = b.id();
  DenseMatrix out = a.value().cwiseProduct(b.value());
  return t.record(std::move(out), t.needs_grad(ia) || t.needs_grad(ib),
                  [ia, ib](Tape& tp, std::size_t self) {
                    const DenseMatrix& g = tp.output_grad(self);
                    if (tp.needs_grad(ia)) tp.accumulate(ia, g.cwiseProduct(tp.value(ib)));
                    if (tp.needs_grad(ib)) tp.accumulate(ib, g.cwiseProduct(tp.value(ia)));
                  },
                  "hadamard");
}

Var scale(const Var& a, double s) {
  Tape& t = *a.tape();
  const std::size_t ia = a.id();
  DenseMatrix out = a.value() * s;
  return t.record(std::move(out), t.needs_grad(ia),
                  [ia, s](Tape& tp, std::size_t self) { tp.accumulate(ia, tp.output_grad(self) * s); },
                  "scale");
}

Var concat_cols(std::span<const Var> parts) {
  require(!parts.empty(), "concat_cols", "no operands");
  Tape& t = *parts.front().tape();
  const Eigen::Index rows = parts.front().rows();
  Eigen::Index cols = 0;
  bool needs = false;
  std::vector<std::size_t> ids;
  for (const Var& p : parts) {
    require(p.tape() == &t && p.rows() == rows, "concat_cols", [&] { return "row mismatch " + shape(p); });
    cols += p.cols();
    needs = needs || t.needs_grad(p.id());
    ids.push_back(p.id());
  }
  DenseMatrix out(rows, cols);
  Eigen::Index c = 0;
  for (const Var& p : parts) {
    out.middleCols(c, p.cols()) = p.value();
    c += p.cols();
  }
  return t.record(std::move(out), needs,
                  [ids](Tape& tp, std::size_t self) {
                    const DenseMatrix& g = tp.output_grad(self);
                    Eigen::Index c = 0;
                    for (std::size_t id : ids) {
                      const Eigen::Index w = tp.value(id).cols();
                      if (tp.needs_grad(id)) tp.accumulate(id, g.middleCols(c, w));
                      c += w;
                    }
                  },
                  "concat_cols");
}

Var concat_rows(std::span<const Var> parts) {
  require(!parts.empty(), "concat_rows", "no operands");
  Tape& t = *parts.front().tape();
  const Eigen::Index cols = parts.front().cols();
  Eigen::Index rows = 0;
  bool needs = false;
  std::vector<std::size_t> ids;
  for (const Var& p : parts) {
    require(p.tape() == &t && p.cols() == cols, "concat_rows", [&] { return "column mismatch " + shape(p); });
    rows += p.rows();
    needs = needs || t.needs_grad(p.id());
    ids.push_back(p.id());
  }
  DenseMatrix out(rows, cols);
  Eigen::Index r = 0;
  for (const Var& p : parts) {
    out.middleRows(r, p.rows()) = p.value();
    r += p.rows();
  }
  return t.record(std::move(out), needs,
                  [ids](Tape& tp, std::size_t self) {
                    const DenseMatrix& g = tp.output_grad(self);
                    Eigen::Index r = 0;
                    for (std::size_t id : ids) {
                      const Eigen::Index h = tp.value(id).rows();
                      if (tp.needs_grad(id)) tp.accumulate(id, g.middleRows(r, h));
                      r += h;
                    }
                  },
                  "concat_rows");
}

Var mean_rows(const Var& a) {
  Tape& t = *a.tape();
  require(a.rows() > 0, "mean_rows", "empty operand");
  const std::size_t ia = a.id();
  const double n = static_cast<double>(a.rows());
  DenseMatrix out = a.value().colwise().sum() / n;
  return t.record(std::move(out), t.needs_grad(ia),
                  [ia, n](Tape& tp, std::size_t self) {
                    tp.grad_buffer(ia).rowwise() += tp.output_grad(self).row(0) / n;
                  },
                  "mean_rows");
}

Var mean_cols(const Var& a) {
  Tape& t = *a.tape();
  require(a.cols() > 0, "mean_cols", "empty operand");
  const std::size_t ia = a.id();
  const double n = static_cast<double>(a.cols());
  DenseMatrix out = a.value().rowwise().sum() / n;
  return t.record(std::move(out), t.needs_grad(ia),
                  [ia, n](Tape& tp, std::size_t self) {
                    tp.grad_buffer(ia).colwise() += tp.output_grad(self).col(0) / n;
                  },
                  "mean_cols");
}

Var mean_all(const Var& a) {
  Tape& t = *a.tape();
  require(a.value().size() > 0, "mean_all", "empty operand");
  const std::size_t ia = a.id();
  const double n = static_cast<double>(a.value().size());
  DenseMatrix out(1, 1);
  out(0, 0) = a.value().sum() / n;
  return t.record(std::move(out), t.needs_grad(ia),
                  [ia, n](Tape& tp, std::size_t self) {
                    tp.grad_buffer(ia).array() += tp.output_grad(self)(0, 0) / n;
                  },
                  "mean_all");
}

Var relu(const Var& a) {
  Tape& t = *a.tape();
  const std::size_t ia = a.id();
  DenseMatrix out = a.value().cwiseMax(0.0);
  return t.record(std::move(out), t.needs_grad(ia),
                  [ia](Tape& tp, std::size_t self) {
                    const auto mask = (tp.value(ia).array() > 0.0).cast<double>();
                    tp.accumulate(ia, (tp.output_grad(self).array() * mask).matrix());
                  },
                  "relu");
}

Var tanh(const Var& a) {
  Tape& t = *a.tape();
  const std::size_t ia = a.id();
  // 2 / (1 + e^{-2x}) - 1 vectorizes through exp and saturates cleanly at
  // both ends; its absolute error stays at a few ulps of 1.
  DenseMatrix out = (2.0 / (1.0 + (-2.0 * a.value().array()).exp()) - 1.0).matrix();
  return t.record(std::move(out), t.needs_grad(ia),
                  [ia](Tape& tp, std::size_t self) {
                    const auto y = tp.value(self).array();
                    tp.accumulate(ia, (tp.output_grad(self).array() * (1.0 - y * y)).matrix());
                  },
                  "tanh");
}

Var sigmoid(const Var& a) {
  Tape& t = *a.tape();
  const std::size_t ia = a.id();
  DenseMatrix out = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
  return t.record(std::move(out), t.needs_grad(ia),
                  [ia](Tape& tp, std::size_t self) {
                    const auto y = tp.value(self).array();
                    tp.accumulate(ia, (tp.output_grad(self).array() * y * (1.0 - y)).matrix());
                  },
                  "sigmoid");
}

Var exp(const Var& a) {
  Tape& t = *a.tape();
  const std::size_t ia = a.id();
  DenseMatrix out = a.value().array().exp().matrix();
  return t.record(std::move(out), t.needs_grad(ia),
                  [ia](Tape& tp, std::size_t self) {
                    tp.accumulate(ia, (tp.output_grad(self).array() * tp.value(self).array()).matrix());
                  },
                  "exp");
}

Var softmax_rows(const Var& a) {
  Tape& t = *a.tape();
  require(a.cols() > 0, "softmax_rows", "empty rows");
  const std::size_t ia = a.id();
  DenseMatrix out = a.value();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    row.array() -= row.maxCoeff();
    row = row.array().exp().matrix();
    row /= row.sum();
  }
  return t.record(std::move(out), t.needs_grad(ia),
                  [ia](Tape& tp, std::size_t self) {
                    const DenseMatrix& g = tp.output_grad(self);
                    const DenseMatrix& y = tp.value(self);
                    const Eigen::VectorXd inner = g.cwiseProduct(y).rowwise().sum();
                    DenseMatrix centered = g.colwise() - inner;
                    tp.accumulate(ia, y.cwiseProduct(centered));
                  },
                  "softmax_rows");
}

Var dot(const Var& a, const Var& b) {
  Tape& t = same_tape(a, b, "dot");
  require(a.rows() == b.rows() && a.cols() == b.cols(), "dot", [&] { return shape(a) + " . " + shape(b); });
  const std::size_t ia = a.id(), ib = b.id();
  DenseMatrix out(1, 1);
  out(0, 0) = a.value().cwiseProduct(b.value()).sum();
  return t.record(std::move(out), t.needs_grad(ia) || t.needs_grad(ib),
                  [ia, ib](Tape& tp, std::size_t self) {
                    const double g = tp.output_grad(self)(0, 0);
                    if (tp.needs_grad(ia)) tp.accumulate(ia, g * tp.value(ib));
                    if (tp.needs_grad(ib)) tp.accumulate(ib, g * tp.value(ia));
                  },
                  "dot");
}

Var gather_rows(const Var& a, std::span<const std::size_t> rows) {
  Tape& t = *a.tape();
  const std::size_t ia = a.id();
  auto idx = std::make_shared<std::vector<std::size_t>>(rows.begin(), rows.end());
  DenseMatrix out(static_cast<Eigen::Index>(idx->size()), a.cols());
  const auto limit = static_cast<std::size_t>(a.rows());
  require(std::all_of(idx->begin(), idx->end(), [limit](std::size_t r) { return r < limit; }),
          "gather_rows", "row index out of range");
  const DenseMatrix& av = a.value();
  for (std::size_t i = 0; i < idx->size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = av.row(static_cast<Eigen::Index>((*idx)[i]));
  }
  return t.record(std::move(out), t.needs_grad(ia),
                  [ia, idx](Tape& tp, std::size_t self) {
                    const DenseMatrix& g = tp.output_grad(self);
                    DenseMatrix& ga = tp.grad_buffer(ia);
                    for (std::size_t i = 0; i < idx->size(); ++i)
                      ga.row(static_cast<Eigen::Index>((*idx)[i])) += g.row(static_cast<Eigen::Index>(i));
                  },
                  "gather_rows");
}

Var gather_mean(const Var& a, std::shared_ptr<const std::vector<std::vector<std::size_t>>> groups) {
  Tape& t = *a.tape();
  const std::size_t ia = a.id();
  const auto& gs = *groups;
  const DenseMatrix& av = a.value();
  DenseMatrix out = DenseMatrix::Zero(static_cast<Eigen::Index>(gs.size()), a.cols());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (gs[i].empty()) require(false, "gather_mean", "empty group");
    auto row = out.row(static_cast<Eigen::Index>(i));
    for (std::size_t j : gs[i]) {
      if (j >= static_cast<std::size_t>(a.rows())) require(false, "gather_mean", "row index out of range");
      row += av.row(static_cast<Eigen::Index>(j));
    }
    row /= static_cast<double>(gs[i].size());
  }
  return t.record(std::move(out), t.needs_grad(ia),
                  [ia, groups](Tape& tp, std::size_t self) {
                    const DenseMatrix& g = tp.output_grad(self);
                    DenseMatrix& ga = tp.grad_buffer(ia);
                    const auto& gs = *groups;
                    for (std::size_t i = 0; i < gs.size(); ++i) {
                      const double w = 1.0 / static_cast<double>(gs[i].size());
                      for (std::size_t j : gs[i]) ga.row(static_cast<Eigen::Index>(j)) += w * g.row(static_cast<Eigen::Index>(i));
                    }
                  },
                  "gather_mean");
}

Var pair_bilinear(const Var& z, const Var& w, std::span<const std::size_t> left,
                  std::span<const std::size_t> right) {
  Tape& t = same_tape(z, w, "pair_bilinear");
  require(w.rows() == 1 && w.cols() == z.cols(), "pair_bilinear", [&] { return shape(z) + " with weights " + shape(w); });
  require(left.size() == right.size(), "pair_bilinear", "index lists differ in length");
  const auto limit = static_cast<std::size_t>(z.rows());
  const auto in_range = [limit](std::size_t r) { return r < limit; };
  require(std::all_of(left.begin(), left.end(), in_range) && std::all_of(right.begin(), right.end(), in_range),
          "pair_bilinear", "row index out of range");
  auto l = std::make_shared<std::vector<std::size_t>>(left.begin(), left.end());
  auto r = std::make_shared<std::vector<std::size_t>>(right.begin(), right.end());
  const std::size_t iz = z.id(), iw = w.id();
  const DenseMatrix& zv = z.value();
  const auto wv = w.value().row(0);
  DenseMatrix out(static_cast<Eigen::Index>(l->size()), 1);
  for (std::size_t k = 0; k < l->size(); ++k) {
    out(static_cast<Eigen::Index>(k), 0) =
        wv.dot(zv.row(static_cast<Eigen::Index>((*l)[k])).cwiseProduct(zv.row(static_cast<Eigen::Index>((*r)[k]))));
  }
  return t.record(std::move(out), t.needs_grad(iz) || t.needs_grad(iw),
                  [iz, iw, l, r](Tape& tp, std::size_t self) {
                    const DenseMatrix& g = tp.output_grad(self);
                    const DenseMatrix& zv = tp.value(iz);
                    const auto wv = tp.value(iw).row(0);
                    if (tp.needs_grad(iw)) {
                      Eigen::RowVectorXd gw = Eigen::RowVectorXd::Zero(zv.cols());
                      for (std::size_t k = 0; k < l->size(); ++k) {
                        gw += g(static_cast<Eigen::Index>(k), 0) *
                              zv.row(static_cast<Eigen::Index>((*l)[k])).cwiseProduct(zv.row(static_cast<Eigen::Index>((*r)[k])));
                      }
                      tp.accumulate(iw, gw);
                    }
                    if (tp.needs_grad(iz)) {
                      DenseMatrix& gz = tp.grad_buffer(iz);
                      for (std::size_t k = 0; k < l->size(); ++k) {
                        const auto a = static_cast<Eigen::Index>((*l)[k]);
                        const auto b = static_cast<Eigen::Index>((*r)[k]);
                        const double gk = g(static_cast<Eigen::Index>(k), 0);
                        gz.row(a) += gk * wv.cwiseProduct(zv.row(b));
                        gz.row(b) += gk * wv.cwiseProduct(zv.row(a));
                      }
                    }
                  },
                  "pair_bilinear");
}

Var row_scale(const Var& x, const Var& s) {
  Tape& t = same_tape(x, s, "row_scale");
  require(s.cols() == 1 && s.rows() == x.rows(), "row_scale", [&] { return shape(x) + " by " + shape(s); });
  const std::size_t ix = x.id(), is = s.id();
  DenseMatrix out = s.value().col(0).asDiagonal() * x.value();
  return t.record(std::move(out), t.needs_grad(ix) || t.needs_grad(is),
                  [ix, is](Tape& tp, std::size_t self) {
                    const DenseMatrix& g = tp.output_grad(self);
                    if (tp.needs_grad(ix)) tp.accumulate(ix, tp.value(is).col(0).asDiagonal() * g);
                    if (tp.needs_grad(is)) tp.grad_buffer(is).col(0) += g.cwiseProduct(tp.value(ix)).rowwise().sum();
                  },
                  "row_scale");
}

Var column(const Var& a, Eigen::Index j) {
  Tape& t = *a.tape();
  require(j >= 0 && j < a.cols(), "column", "index out of range");
  const std::size_t ia = a.id();
  DenseMatrix out = a.value().col(j);
  return t.record(std::move(out), t.needs_grad(ia),
                  [ia, j](Tape& tp, std::size_t self) { tp.grad_buffer(ia).col(j) += tp.output_grad(self).col(0); },
                  "column");
}

Var binary_cross_entropy(const Var& p, std::span<const double> labels, double clamp) {
  Tape& t = *p.tape();
  require(p.cols() == 1 && static_cast<std::size_t>(p.rows()) == labels.size() && !labels.empty(),
          "binary_cross_entropy", [&] { return shape(p) + " vs " + std::to_string(labels.size()) + " labels"; });
  const std::size_t ip = p.id();
  auto y = std::make_shared<std::vector<double>>(labels.begin(), labels.end());
  const double n = static_cast<double>(labels.size());
  double total = 0.0;
  for (std::size_t i = 0; i < y->size(); ++i) {
    const double q = std::clamp(p.value()(static_cast<Eigen::Index>(i), 0), clamp, 1.0 - clamp);
    total += (*y)[i] * std::log(q) + (1.0 - (*y)[i]) * std::log(1.0 - q);
  }
  DenseMatrix out(1, 1);
  out(0, 0) = -total / n;
  return t.record(std::move(out), t.needs_grad(ip),
                  [ip, y, n, clamp](Tape& tp, std::size_t self) {
                    const double g = tp.output_grad(self)(0, 0);
                    const DenseMatrix& pv = tp.value(ip);
                    DenseMatrix& gp = tp.grad_buffer(ip);
                    for (std::size_t i = 0; i < y->size(); ++i) {
                      const auto r = static_cast<Eigen::Index>(i);
                      const double q = pv(r, 0);
                      if (q < clamp || q > 1.0 - clamp) continue;
                      gp(r, 0) += -g * ((*y)[i] / q - (1.0 - (*y)[i]) / (1.0 - q)) / n;
                    }
                  },
                  "binary_cross_entropy");
}

// ---------------------------------------------------------------------------
// Gradient check

GradCheckResult grad_check(const LossBuilder& build, ParamStore& params, double epsilon) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) throw DataError("grad_check: epsilon must lie in [1e-7, 1e-3]");
  auto evaluate = [&] {
    Tape tape;
    return build(tape, params).scalar();
  };

  params.zero_grad();
  {
    Tape tape;
    Var loss = build(tape, params);
    tape.backward(loss);
  }
  if (evaluate() != evaluate()) throw DataError("grad_check: loss is not deterministic");

  GradCheckResult result;
  for (std::size_t p = 0; p < params.size(); ++p) {
    const DenseMatrix analytic = params.grad(p);
    DenseMatrix& value = params.value(p);
    for (Eigen::Index k = 0; k < value.size(); ++k) {
      double& entry = value.data()[k];
      const double saved = entry;
      entry = saved + epsilon;
      const double up = evaluate();
      entry = saved - epsilon;
      const double down = evaluate();
      entry = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double a = analytic.data()[k];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      const double rel = std::abs(a - numeric) / denom;
      ++result.entries_checked;
      if (rel > result.max_relative_error || result.worst_parameter.empty()) {
        result.max_relative_error = rel;
        result.worst_parameter = params.name(p);
        result.worst_entry = static_cast<std::size_t>(k);
        result.analytic = a;
        result.numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace ad
}  // namespace mrgnn
