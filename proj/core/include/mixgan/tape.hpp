// Copyright 2026 The mixgan Authors
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

#pragma once

// Reverse-mode automatic differentiation over Tensor values.
//
// A Tape records every operation in creation order, which is already a
// topological order of the computation DAG. backward() walks the nodes
// reachable from the loss in reverse and accumulates gradients. Nodes that
// the loss does not reach keep a zero gradient.
//
// A tape is single-threaded. Vars are cheap handles (tape pointer + index)
// and are only meaningful while their tape is alive and not cleared.

#include <cstddef>
#include <span>
#include <vector>

#include "mixgan/tensor.hpp"

namespace mixgan {

inline constexpr double kDefaultLogFloor = 1e-12;

enum class Op {
  kLeaf,
  kMatmul,
  kRelu,
  kSigmoid,
  kLogClamped,
  kMean,
  kSum,
  kAddBias,
  kAdd,
  kSub,
  kMul,
  kNeg,
  kAffine,
  kConcatRows,
};

const char* op_name(Op op);

class Tape;

class Var {
 public:
  Var() = default;

  Tape* tape() const noexcept { return tape_; }
  std::size_t id() const noexcept { return id_; }
  bool valid() const noexcept { return tape_ != nullptr; }

  const Tensor& value() const;
  const Tensor& grad() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Inputs, constants and parameters all enter the graph as leaves.
  Var leaf(Tensor value);

  Var matmul(Var a, Var b);
  Var relu(Var a);
  Var sigmoid(Var a);
  Var log_clamped(Var a, double floor = kDefaultLogFloor);
  Var mean(Var a);
  Var sum(Var a);
  /// a[m x n] + b[n], broadcast over rows.
  Var add_bias(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var neg(Var a);
  /// scale * a + shift, elementwise.
  Var affine(Var a, double scale, double shift);
  /// Stacks matrices with equal column counts along the batch axis.
  Var concat_rows(std::span<const Var> parts);

  /// Fills gradient accumulators with dLoss/dNode for every node. Gradients
  /// from an earlier pass are discarded first.
  void backward(Var loss);

  const Tensor& value(Var v) const;
  const Tensor& grad(Var v) const;
  Op op(Var v) const;

  std::size_t size() const noexcept { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  struct Node {
    Op op = Op::kLeaf;
    std::vector<std::size_t> inputs;
    Tensor value;
    Tensor grad;
    double scale = 0.0;  // kAffine scale, kLogClamped floor
    double shift = 0.0;
  };

  Var push(Op op, std::vector<std::size_t> inputs, Tensor value, double scale = 0.0,
           double shift = 0.0);
  const Node& node(Var v) const;
  void check_owned(Var v) const;
  void propagate(std::size_t index);

  std::vector<Node> nodes_;
};

// Free-function spellings; the operands' tape records the node.
Var matmul(Var a, Var b);
Var relu(Var a);
Var sigmoid(Var a);
Var log_clamped(Var a, double floor = kDefaultLogFloor);
Var mean(Var a);
Var sum(Var a);
Var add_bias(Var a, Var b);
Var neg(Var a);
Var affine(Var a, double scale, double shift);
/// 1 - a.
Var one_minus(Var a);
Var concat_rows(std::span<const Var> parts);

Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);
Var operator-(Var a);

}  // namespace mixgan
