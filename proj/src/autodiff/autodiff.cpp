// Copyright 2026 The DSE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dse/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

namespace dse::ad {

namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;

ConstMap as_matrix(const Tensor& t) {
  return ConstMap(t.data().data(), static_cast<Eigen::Index>(t.rows()),
                  static_cast<Eigen::Index>(t.cols()));
}

MutMap as_matrix(Tensor& t) {
  return MutMap(t.data().data(), static_cast<Eigen::Index>(t.rows()),
                static_cast<Eigen::Index>(t.cols()));
}

void require_rank2(std::string_view op, const Tensor& t) {
  if (t.rank() != 2) {
    throw ShapeError(std::string(op), "expected a rank-2 tensor, got " +
                                          shape_string(t.shape()));
  }
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Applies fn to every element of a, recording a node whose backward
// multiplies the incoming gradient by dfn(input, output).
template <typename F, typename D>
Var unary(Op op, Var a, F fn, D dfn) {
  const Tensor& x = a.value();
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = fn(x[i]);
  const std::size_t pa = a.id();
  return a.tape().record(op, std::move(out), {a},
                         [pa, dfn](Tape& tape, std::size_t self) {
                           const Tensor& g = tape.grad(self);
                           const Tensor& x = tape.value(pa);
                           const Tensor& y = tape.value(self);
                           Tensor& gx = tape.accumulate(pa);
                           for (std::size_t i = 0; i < g.size(); ++i) {
                             gx[i] += g[i] * dfn(x[i], y[i]);
                           }
                         });
}

void check_same_tape(std::string_view op, Var a, Var b) {
  if (&a.tape() != &b.tape()) {
    throw std::invalid_argument(std::string(op) + ": operands on different tapes");
  }
}

}  // namespace

std::string_view op_name(Op op) {
  switch (op) {
    case Op::kLeaf: return "leaf";
    case Op::kMatmul: return "matmul";
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kMul: return "mul";
    case Op::kScale: return "scale";
    case Op::kAddScalar: return "add_scalar";
    case Op::kConcat: return "concat";
    case Op::kSigmoid: return "sigmoid";
    case Op::kTanh: return "tanh";
    case Op::kRelu: return "relu";
    case Op::kLog: return "log";
    case Op::kSoftmax: return "softmax";
    case Op::kLogSoftmax: return "log_softmax";
    case Op::kSum: return "sum";
    case Op::kMean: return "mean";
    case Op::kRows: return "rows";
    case Op::kSlice: return "slice";
    case Op::kBlend: return "blend";
    case Op::kNll: return "nll_loss";
    case Op::kCustom: return "custom";
  }
  return "unknown";
}

// ---- ParameterSet ----------------------------------------------------------

Parameter& ParameterSet::add(std::string name, Tensor value, bool trainable) {
  if (index_.contains(name)) {
    throw std::invalid_argument("duplicate parameter name: " + name);
  }
  index_.emplace(name, params_.size());
  Tensor grad(value.shape());
  params_.push_back(Parameter{std::move(name), std::move(value),
                              std::move(grad), trainable});
  return params_.back();
}

Parameter* ParameterSet::find(std::string_view name) {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &params_[it->second];
}

const Parameter* ParameterSet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &params_[it->second];
}

Parameter& ParameterSet::get(std::string_view name) {
  Parameter* p = find(name);
  if (!p) throw std::out_of_range("unknown parameter: " + std::string(name));
  return *p;
}

const Parameter& ParameterSet::get(std::string_view name) const {
  const Parameter* p = find(name);
  if (!p) throw std::out_of_range("unknown parameter: " + std::string(name));
  return *p;
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

void ParameterSet::zero_grad() {
  for (auto& p : params_) {
    if (p.grad.shape() != p.value.shape()) {
      p.grad = Tensor(p.value.shape());
    } else {
      p.grad.fill(0.0);
    }
  }
}

double ParameterSet::grad_norm() const {
  double s = 0.0;
  for (const auto& p : params_) {
    if (!p.trainable) continue;
    for (double g : p.grad.data()) s += g * g;
  }
  return std::sqrt(s);
}

double ParameterSet::value_norm() const {
  double s = 0.0;
  for (const auto& p : params_) {
    for (double v : p.value.data()) s += v * v;
  }
  return std::sqrt(s);
}

bool ParameterSet::identical(const ParameterSet& other) const {
  if (params_.size() != other.params_.size()) return false;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name != other.params_[i].name) return false;
    if (!(params_[i].value == other.params_[i].value)) return false;
  }
  return true;
}

// ---- Var / Tape ------------------------------------------------------------

const Tensor& Var::value() const { return tape_->value(id_); }
const Tensor& Var::grad() const { return tape_->grad(id_); }
bool Var::requires_grad() const { return tape_->requires_grad(id_); }

Var Tape::constant(Tensor value) {
  return record(Op::kLeaf, std::move(value), {}, nullptr);
}

Var Tape::variable(Tensor value) {
  Var v = record(Op::kLeaf, std::move(value), {}, nullptr);
  nodes_[v.id_].requires_grad = grad_enabled_;
  return v;
}

Var Tape::param(Parameter& p, bool frozen) {
  Var v = record(Op::kLeaf, p.value, {}, nullptr);
  Node& node = nodes_[v.id_];
  node.requires_grad = grad_enabled_ && p.trainable && !frozen;
  if (node.requires_grad) node.bound = &p;
  return v;
}

Var Tape::record(Op op, Tensor value, std::vector<Var> parents,
                 BackwardFn backward) {
  if (!value.all_finite()) {
    throw NonFiniteError(std::string(op_name(op)) +
                         ": produced a non-finite value");
  }
  Node node;
  node.op = op;
  node.value = std::move(value);
  node.parents.reserve(parents.size());
  for (const Var& p : parents) {
    if (p.tape_ != this) {
      throw std::invalid_argument(std::string(op_name(op)) +
                                  ": operand recorded on another tape");
    }
    node.parents.push_back(p.id_);
    node.requires_grad = node.requires_grad || nodes_[p.id_].requires_grad;
  }
  node.requires_grad = node.requires_grad && grad_enabled_;
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Tensor& Tape::accumulate(std::size_t id) {
  Node& node = nodes_[id];
  if (node.grad.shape() != node.value.shape()) node.grad = Tensor(node.value.shape());
  return node.grad;
}

void Tape::backward(Var root) {
  if (root.tape_ != this) throw std::invalid_argument("backward: root on another tape");
  if (root.value().size() != 1) {
    throw ShapeError("backward", "root must be a scalar, got " +
                                     shape_string(root.value().shape()));
  }
  if (backward_done_) throw std::logic_error("backward: tape already consumed");
  backward_done_ = true;
  if (!nodes_[root.id_].requires_grad) return;
  accumulate(root.id_).fill(1.0);
  for (std::size_t id = root.id_ + 1; id-- > 0;) {
    Node& node = nodes_[id];
    if (!node.requires_grad || node.grad.empty()) continue;
    if (node.backward) node.backward(*this, id);
  }
  for (Node& node : nodes_) {
    if (node.bound && !node.grad.empty()) {
      if (node.bound->grad.shape() != node.bound->value.shape()) {
        node.bound->grad = Tensor(node.bound->value.shape());
      }
      node.bound->grad += node.grad;
    }
  }
}

// ---- ops -------------------------------------------------------------------

Var matmul(Var a, Var b) {
  check_same_tape("matmul", a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  require_rank2("matmul", x);
  require_rank2("matmul", y);
  if (x.cols() != y.rows()) throw ShapeError("matmul", x.shape(), y.shape());
  Tensor out({x.rows(), y.cols()});
  as_matrix(out).noalias() = as_matrix(x) * as_matrix(y);
  const std::size_t pa = a.id(), pb = b.id();
  return a.tape().record(Op::kMatmul, std::move(out), {a, b},
                         [pa, pb](Tape& tape, std::size_t self) {
                           auto g = as_matrix(tape.grad(self));
                           if (tape.requires_grad(pa)) {
                             as_matrix(tape.accumulate(pa)).noalias() +=
                                 g * as_matrix(tape.value(pb)).transpose();
                           }
                           if (tape.requires_grad(pb)) {
                             as_matrix(tape.accumulate(pb)).noalias() +=
                                 as_matrix(tape.value(pa)).transpose() * g;
                           }
                         });
}

Var add(Var a, Var b) {
  check_same_tape("add", a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  const std::size_t pa = a.id(), pb = b.id();
  if (x.shape() == y.shape()) {
    Tensor out = x;
    out += y;
    return a.tape().record(Op::kAdd, std::move(out), {a, b},
                           [pa, pb](Tape& tape, std::size_t self) {
                             const Tensor& g = tape.grad(self);
                             if (tape.requires_grad(pa)) tape.accumulate(pa) += g;
                             if (tape.requires_grad(pb)) tape.accumulate(pb) += g;
                           });
  }
  // Bias-add: [m x n] + [1 x n].
  if (x.rank() != 2 || y.rank() != 2 || y.rows() != 1 || y.cols() != x.cols()) {
    throw ShapeError("add", x.shape(), y.shape());
  }
  Tensor out = x;
  const std::size_t m = x.rows(), n = x.cols();
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) out(r, c) += y[c];
  }
  return a.tape().record(Op::kAdd, std::move(out), {a, b},
                         [pa, pb, m, n](Tape& tape, std::size_t self) {
                           const Tensor& g = tape.grad(self);
                           if (tape.requires_grad(pa)) tape.accumulate(pa) += g;
                           if (tape.requires_grad(pb)) {
                             Tensor& gb = tape.accumulate(pb);
                             for (std::size_t r = 0; r < m; ++r) {
                               for (std::size_t c = 0; c < n; ++c) gb[c] += g(r, c);
                             }
                           }
                         });
}

Var sub(Var a, Var b) {
  check_same_tape("sub", a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  if (x.shape() != y.shape()) throw ShapeError("sub", x.shape(), y.shape());
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= y[i];
  const std::size_t pa = a.id(), pb = b.id();
  return a.tape().record(Op::kSub, std::move(out), {a, b},
                         [pa, pb](Tape& tape, std::size_t self) {
                           const Tensor& g = tape.grad(self);
                           if (tape.requires_grad(pa)) tape.accumulate(pa) += g;
                           if (tape.requires_grad(pb)) {
                             Tensor& gb = tape.accumulate(pb);
                             for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
                           }
                         });
}

Var mul(Var a, Var b) {
  check_same_tape("mul", a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  if (x.shape() != y.shape()) throw ShapeError("mul", x.shape(), y.shape());
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= y[i];
  const std::size_t pa = a.id(), pb = b.id();
  return a.tape().record(Op::kMul, std::move(out), {a, b},
                         [pa, pb](Tape& tape, std::size_t self) {
                           const Tensor& g = tape.grad(self);
                           if (tape.requires_grad(pa)) {
                             Tensor& ga = tape.accumulate(pa);
                             const Tensor& y = tape.value(pb);
                             for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i];
                           }
                           if (tape.requires_grad(pb)) {
                             Tensor& gb = tape.accumulate(pb);
                             const Tensor& x = tape.value(pa);
                             for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * x[i];
                           }
                         });
}

Var scale(Var a, double factor) {
  return unary(
      Op::kScale, a, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Var add_scalar(Var a, double value) {
  return unary(
      Op::kAddScalar, a, [value](double x) { return x + value; },
      [](double, double) { return 1.0; });
}

Var concat(std::initializer_list<Var> parts, std::size_t axis) {
  return concat(std::span<const Var>(parts.begin(), parts.size()), axis);
}

Var concat(std::span<const Var> parts, std::size_t axis) {
  if (parts.empty()) throw ShapeError("concat", "no operands");
  if (axis > 1) throw ShapeError("concat", "axis must be 0 or 1");
  const Tensor& first = parts[0].value();
  require_rank2("concat", first);
  std::size_t rows = first.rows(), cols = first.cols();
  std::vector<std::size_t> extents;
  extents.reserve(parts.size());
  extents.push_back(axis == 0 ? rows : cols);
  for (std::size_t k = 1; k < parts.size(); ++k) {
    check_same_tape("concat", parts[0], parts[k]);
    const Tensor& t = parts[k].value();
    require_rank2("concat", t);
    if (axis == 0) {
      if (t.cols() != cols) throw ShapeError("concat", first.shape(), t.shape());
      rows += t.rows();
      extents.push_back(t.rows());
    } else {
      if (t.rows() != rows) throw ShapeError("concat", first.shape(), t.shape());
      cols += t.cols();
      extents.push_back(t.cols());
    }
  }
  Tensor out({rows, cols});
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Tensor& t = parts[k].value();
    if (axis == 0) {
      std::copy(t.data().begin(), t.data().end(), out.data().begin() + offset * cols);
    } else {
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < t.cols(); ++c) out(r, offset + c) = t(r, c);
      }
    }
    offset += extents[k];
  }
  std::vector<std::size_t> ids;
  for (const Var& p : parts) ids.push_back(p.id());
  return parts[0].tape().record(
      Op::kConcat, std::move(out), std::vector<Var>(parts.begin(), parts.end()),
      [ids, extents, axis, cols](Tape& tape, std::size_t self) {
        const Tensor& g = tape.grad(self);
        std::size_t offset = 0;
        for (std::size_t k = 0; k < ids.size(); ++k) {
          if (tape.requires_grad(ids[k])) {
            Tensor& gk = tape.accumulate(ids[k]);
            if (axis == 0) {
              const double* src = g.data().data() + offset * cols;
              for (std::size_t i = 0; i < gk.size(); ++i) gk[i] += src[i];
            } else {
              for (std::size_t r = 0; r < gk.rows(); ++r) {
                for (std::size_t c = 0; c < gk.cols(); ++c) gk(r, c) += g(r, offset + c);
              }
            }
          }
          offset += extents[k];
        }
      });
}

Var sigmoid(Var a) {
  return unary(
      Op::kSigmoid, a, stable_sigmoid,
      [](double, double y) { return y * (1.0 - y); });
}

Var tanh(Var a) {
  return unary(
      Op::kTanh, a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Var relu(Var a) {
  return unary(
      Op::kRelu, a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var log(Var a) {
  for (double v : a.value().data()) {
    if (!(v > 0.0)) throw NonFiniteError("log: non-positive input");
  }
  return unary(
      Op::kLog, a, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

namespace {

// Visits each softmax group (a row for axis 1, a column for axis 0) as a
// strided view: element j of group k sits at base(k) + j * stride.
struct Groups {
  std::size_t count, length, stride, step;
  std::size_t base(std::size_t k) const { return k * step; }
};

Groups softmax_groups(std::string_view op, const Tensor& t, std::size_t axis) {
  require_rank2(op, t);
  if (axis == 1) return {t.rows(), t.cols(), 1, t.cols()};
  if (axis == 0) return {t.cols(), t.rows(), t.cols(), 1};
  throw ShapeError(std::string(op), "axis must be 0 or 1");
}

}  // namespace

Var softmax(Var a, std::size_t axis) {
  const Tensor& x = a.value();
  const Groups gr = softmax_groups("softmax", x, axis);
  Tensor out(x.shape());
  for (std::size_t k = 0; k < gr.count; ++k) {
    const std::size_t b = gr.base(k);
    double mx = x[b];
    for (std::size_t j = 1; j < gr.length; ++j) mx = std::max(mx, x[b + j * gr.stride]);
    double z = 0.0;
    for (std::size_t j = 0; j < gr.length; ++j) {
      const double e = std::exp(x[b + j * gr.stride] - mx);
      out[b + j * gr.stride] = e;
      z += e;
    }
    for (std::size_t j = 0; j < gr.length; ++j) out[b + j * gr.stride] /= z;
  }
  const std::size_t pa = a.id();
  return a.tape().record(Op::kSoftmax, std::move(out), {a},
                         [pa, gr](Tape& tape, std::size_t self) {
                           const Tensor& g = tape.grad(self);
                           const Tensor& s = tape.value(self);
                           Tensor& gx = tape.accumulate(pa);
                           for (std::size_t k = 0; k < gr.count; ++k) {
                             const std::size_t b = gr.base(k);
                             double dot = 0.0;
                             for (std::size_t j = 0; j < gr.length; ++j) {
                               const std::size_t i = b + j * gr.stride;
                               dot += g[i] * s[i];
                             }
                             for (std::size_t j = 0; j < gr.length; ++j) {
                               const std::size_t i = b + j * gr.stride;
                               gx[i] += s[i] * (g[i] - dot);
                             }
                           }
                         });
}

Var log_softmax(Var a, std::size_t axis) {
  const Tensor& x = a.value();
  const Groups gr = softmax_groups("log_softmax", x, axis);
  Tensor out(x.shape());
  for (std::size_t k = 0; k < gr.count; ++k) {
    const std::size_t b = gr.base(k);
    double mx = x[b];
    for (std::size_t j = 1; j < gr.length; ++j) mx = std::max(mx, x[b + j * gr.stride]);
    double z = 0.0;
    for (std::size_t j = 0; j < gr.length; ++j) z += std::exp(x[b + j * gr.stride] - mx);
    const double lz = mx + std::log(z);
    for (std::size_t j = 0; j < gr.length; ++j) {
      out[b + j * gr.stride] = x[b + j * gr.stride] - lz;
    }
  }
  const std::size_t pa = a.id();
  return a.tape().record(Op::kLogSoftmax, std::move(out), {a},
                         [pa, gr](Tape& tape, std::size_t self) {
                           const Tensor& g = tape.grad(self);
                           const Tensor& ls = tape.value(self);
                           Tensor& gx = tape.accumulate(pa);
                           for (std::size_t k = 0; k < gr.count; ++k) {
                             const std::size_t b = gr.base(k);
                             double total = 0.0;
                             for (std::size_t j = 0; j < gr.length; ++j) {
                               total += g[b + j * gr.stride];
                             }
                             for (std::size_t j = 0; j < gr.length; ++j) {
                               const std::size_t i = b + j * gr.stride;
                               gx[i] += g[i] - std::exp(ls[i]) * total;
                             }
                           }
                         });
}

Var sum(Var a) {
  double s = 0.0;
  for (double v : a.value().data()) s += v;
  const std::size_t pa = a.id();
  return a.tape().record(Op::kSum, Tensor::scalar(s), {a},
                         [pa](Tape& tape, std::size_t self) {
                           const double g = tape.grad(self)[0];
                           Tensor& gx = tape.accumulate(pa);
                           for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g;
                         });
}

Var mean(Var a) {
  const std::size_t n = a.value().size();
  if (n == 0) throw ShapeError("mean", "empty tensor");
  double s = 0.0;
  for (double v : a.value().data()) s += v;
  const std::size_t pa = a.id();
  return a.tape().record(Op::kMean, Tensor::scalar(s / static_cast<double>(n)), {a},
                         [pa, n](Tape& tape, std::size_t self) {
                           const double g = tape.grad(self)[0] / static_cast<double>(n);
                           Tensor& gx = tape.accumulate(pa);
                           for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g;
                         });
}

Var rows(Var table, std::span<const int> ids) {
  const Tensor& t = table.value();
  require_rank2("rows", t);
  const std::size_t d = t.cols();
  Tensor out({ids.size(), d});
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const int id = ids[r];
    if (id < 0 || static_cast<std::size_t>(id) >= t.rows()) {
      throw ShapeError("rows", "index " + std::to_string(id) +
                                   " out of range for table " + shape_string(t.shape()));
    }
    std::copy_n(t.data().begin() + static_cast<std::size_t>(id) * d, d,
                out.data().begin() + r * d);
  }
  const std::size_t pt = table.id();
  std::vector<int> saved(ids.begin(), ids.end());
  return table.tape().record(Op::kRows, std::move(out), {table},
                             [pt, d, saved = std::move(saved)](Tape& tape, std::size_t self) {
                               const Tensor& g = tape.grad(self);
                               Tensor& gt = tape.accumulate(pt);
                               for (std::size_t r = 0; r < saved.size(); ++r) {
                                 double* dst = gt.data().data() + static_cast<std::size_t>(saved[r]) * d;
                                 const double* src = g.data().data() + r * d;
                                 for (std::size_t c = 0; c < d; ++c) dst[c] += src[c];
                               }
                             });
}

Var slice(Var a, std::size_t axis, std::size_t begin, std::size_t end) {
  const Tensor& x = a.value();
  require_rank2("slice", x);
  if (axis > 1) throw ShapeError("slice", "axis must be 0 or 1");
  const std::size_t extent = axis == 0 ? x.rows() : x.cols();
  if (begin > end || end > extent) {
    throw ShapeError("slice", "range [" + std::to_string(begin) + ", " +
                                  std::to_string(end) + ") outside " +
                                  shape_string(x.shape()));
  }
  const std::size_t cols = x.cols();
  Tensor out;
  if (axis == 0) {
    out = Tensor({end - begin, cols});
    std::copy(x.data().begin() + begin * cols, x.data().begin() + end * cols,
              out.data().begin());
  } else {
    out = Tensor({x.rows(), end - begin});
    for (std::size_t r = 0; r < x.rows(); ++r) {
      for (std::size_t c = begin; c < end; ++c) out(r, c - begin) = x(r, c);
    }
  }
  const std::size_t pa = a.id();
  return a.tape().record(Op::kSlice, std::move(out), {a},
                         [pa, axis, begin, cols](Tape& tape, std::size_t self) {
                           const Tensor& g = tape.grad(self);
                           Tensor& gx = tape.accumulate(pa);
                           if (axis == 0) {
                             double* dst = gx.data().data() + begin * cols;
                             for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
                           } else {
                             for (std::size_t r = 0; r < g.rows(); ++r) {
                               for (std::size_t c = 0; c < g.cols(); ++c) gx(r, begin + c) += g(r, c);
                             }
                           }
                         });
}

Var blend(std::span<const double> mask, Var fresh, Var prev) {
  check_same_tape("blend", fresh, prev);
  const Tensor& x = fresh.value();
  const Tensor& y = prev.value();
  if (x.shape() != y.shape()) throw ShapeError("blend", x.shape(), y.shape());
  require_rank2("blend", x);
  if (mask.size() != x.rows()) {
    throw ShapeError("blend", "mask length " + std::to_string(mask.size()) +
                                  " for " + shape_string(x.shape()));
  }
  const std::size_t cols = x.cols();
  Tensor out(x.shape());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double m = mask[r];
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = m * x(r, c) + (1.0 - m) * y(r, c);
  }
  const std::size_t pf = fresh.id(), pp = prev.id();
  std::vector<double> saved(mask.begin(), mask.end());
  return fresh.tape().record(
      Op::kBlend, std::move(out), {fresh, prev},
      [pf, pp, cols, saved = std::move(saved)](Tape& tape, std::size_t self) {
        const Tensor& g = tape.grad(self);
        if (tape.requires_grad(pf)) {
          Tensor& gf = tape.accumulate(pf);
          for (std::size_t r = 0; r < saved.size(); ++r) {
            for (std::size_t c = 0; c < cols; ++c) gf(r, c) += saved[r] * g(r, c);
          }
        }
        if (tape.requires_grad(pp)) {
          Tensor& gp = tape.accumulate(pp);
          for (std::size_t r = 0; r < saved.size(); ++r) {
            for (std::size_t c = 0; c < cols; ++c) gp(r, c) += (1.0 - saved[r]) * g(r, c);
          }
        }
      });
}

Var nll_loss(Var logits, std::span<const int> labels, std::span<const double> weights) {
  const Tensor& x = logits.value();
  require_rank2("nll_loss", x);
  const std::size_t n = x.rows(), k = x.cols();
  if (labels.size() != n) {
    throw ShapeError("nll_loss", std::to_string(labels.size()) + " labels for " +
                                     shape_string(x.shape()));
  }
  if (!weights.empty() && weights.size() != n) {
    throw ShapeError("nll_loss", std::to_string(weights.size()) + " weights for " +
                                     shape_string(x.shape()));
  }
  std::vector<double> w(n, 1.0);
  if (!weights.empty()) w.assign(weights.begin(), weights.end());
  double total_weight = 0.0;
  for (double v : w) total_weight += v;
  if (!(total_weight > 0.0)) throw ShapeError("nll_loss", "total weight is zero");

  Tensor probs(x.shape());
  double loss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double mx = x(r, 0);
    for (std::size_t c = 1; c < k; ++c) mx = std::max(mx, x(r, c));
    double z = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      probs(r, c) = std::exp(x(r, c) - mx);
      z += probs(r, c);
    }
    for (std::size_t c = 0; c < k; ++c) probs(r, c) /= z;
    if (w[r] == 0.0) continue;
    const int label = labels[r];
    if (label < 0 || static_cast<std::size_t>(label) >= k) {
      throw std::out_of_range("nll_loss: label " + std::to_string(label) +
                              " outside [0, " + std::to_string(k) + ")");
    }
    const double log_prob = x(r, static_cast<std::size_t>(label)) - mx - std::log(z);
    loss -= w[r] * log_prob;
  }
  loss /= total_weight;

  const std::size_t pl = logits.id();
  std::vector<int> saved_labels(labels.begin(), labels.end());
  return logits.tape().record(
      Op::kNll, Tensor::scalar(loss), {logits},
      [pl, k, total_weight, w = std::move(w), probs = std::move(probs),
       saved_labels = std::move(saved_labels)](Tape& tape, std::size_t self) {
        const double g = tape.grad(self)[0] / total_weight;
        Tensor& gx = tape.accumulate(pl);
        for (std::size_t r = 0; r < saved_labels.size(); ++r) {
          if (w[r] == 0.0) continue;
          const double s = g * w[r];
          for (std::size_t c = 0; c < k; ++c) gx(r, c) += s * probs(r, c);
          gx(r, static_cast<std::size_t>(saved_labels[r])) -= s;
        }
      });
}

}  // namespace dse::ad
