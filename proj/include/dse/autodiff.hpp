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

#ifndef DSE_AUTODIFF_HPP_
#define DSE_AUTODIFF_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dse/tensor.hpp"

namespace dse::ad {

enum class Op {
  kLeaf,
  kMatmul,
  kAdd,
  kSub,
  kMul,
  kScale,
  kAddScalar,
  kConcat,
  kSigmoid,
  kTanh,
  kRelu,
  kLog,
  kSoftmax,
  kLogSoftmax,
  kSum,
  kMean,
  kRows,
  kSlice,
  kBlend,
  kNll,
  kCustom,
};

std::string_view op_name(Op op);

// A named trainable (or frozen) tensor owned outside any tape.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  bool trainable = true;
};

// Insertion-ordered collection of parameters. Copyable, so a run can snapshot
// its best weights or hand a private copy to an evaluation thread.
class ParameterSet {
 public:
  Parameter& add(std::string name, Tensor value, bool trainable = true);
  Parameter& get(std::string_view name);
  const Parameter& get(std::string_view name) const;
  Parameter* find(std::string_view name);
  const Parameter* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  std::size_t size() const { return params_.size(); }
  std::size_t scalar_count() const;
  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  void zero_grad();
  double grad_norm() const;
  double value_norm() const;

  // True when names, shapes and values match exactly.
  bool identical(const ParameterSet& other) const;

 private:
  std::vector<Parameter> params_;
  std::unordered_map<std::string, std::size_t> index_;
};

class Tape;

// Handle to a node on a tape. Cheap to copy; valid as long as the tape lives.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  const Tensor& grad() const;
  const Shape& shape() const { return value().shape(); }
  bool requires_grad() const;
  std::size_t id() const { return id_; }
  Tape& tape() const { return *tape_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Append-only record of a forward computation. Node ids are assigned in
// creation order, which is also a topological order. A tape is used by one
// thread at a time.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  Var variable(Tensor value);
  // Binds a parameter as a leaf. Gradients flow into `p.grad` on backward
  // unless the parameter is frozen (argument or `p.trainable == false`).
  Var param(Parameter& p, bool frozen = false);

  // Appends a node. This is the extension point every op goes through; the
  // backward function reads `grad(self)` and adds into `accumulate(parent)`.
  Var record(Op op, Tensor value, std::vector<Var> parents, BackwardFn backward);

  void backward(Var root);

  bool grad_enabled() const { return grad_enabled_; }
  std::size_t size() const { return nodes_.size(); }

  const Tensor& value(std::size_t id) const { return nodes_[id].value; }
  const Tensor& grad(std::size_t id) const { return nodes_[id].grad; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  Op op(std::size_t id) const { return nodes_[id].op; }
  std::span<const std::size_t> parents(std::size_t id) const {
    return nodes_[id].parents;
  }
  // Zero-initialised on first use. Callers must check requires_grad first.
  Tensor& accumulate(std::size_t id);

 private:
  struct Node {
    Op op = Op::kLeaf;
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    std::vector<std::size_t> parents;
    BackwardFn backward;
    Parameter* bound = nullptr;
  };

  bool grad_enabled_;
  bool backward_done_ = false;
  std::vector<Node> nodes_;
};

// ---- forward ops -----------------------------------------------------------

Var matmul(Var a, Var b);
// Same-shape addition, or bias-add of a [1 x n] row onto an [m x n] matrix.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double factor);
Var add_scalar(Var a, double value);
Var concat(std::span<const Var> parts, std::size_t axis);
Var concat(std::initializer_list<Var> parts, std::size_t axis);
Var sigmoid(Var a);
Var tanh(Var a);
Var relu(Var a);
Var log(Var a);
Var softmax(Var a, std::size_t axis);
Var log_softmax(Var a, std::size_t axis);
Var sum(Var a);
Var mean(Var a);
// Embedding lookup: gathers rows of `table`. Repeated ids accumulate.
Var rows(Var table, std::span<const int> ids);
Var slice(Var a, std::size_t axis, std::size_t begin, std::size_t end);
// Row-wise select: out[r] = mask[r] * fresh[r] + (1 - mask[r]) * prev[r].
Var blend(std::span<const double> mask, Var fresh, Var prev);
// Weighted mean negative log-likelihood of `labels` under row-wise
// log-softmax of `logits`. Rows with weight 0 may carry label -1.
Var nll_loss(Var logits, std::span<const int> labels,
             std::span<const double> weights = {});

}  // namespace dse::ad

#endif  // DSE_AUTODIFF_HPP_
