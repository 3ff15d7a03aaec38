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

#include "mixgan/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixgan/errors.hpp"

namespace mixgan {

namespace {

// Largest double below 1 and smallest positive normal; sigmoid output is
// kept strictly inside (0, 1).
constexpr double kSigmoidHi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
constexpr double kSigmoidLo = std::numeric_limits<double>::min();

double stable_sigmoid(double x) {
  double s;
  if (x >= 0) {
    s = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    s = e / (1.0 + e);
  }
  return std::clamp(s, kSigmoidLo, kSigmoidHi);
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(what) + " shape mismatch: " + shape_to_string(a.shape()) +
                         " vs " + shape_to_string(b.shape()));
  }
}

void accumulate(Tensor& into, const Tensor& from) {
  auto dst = into.values();
  auto src = from.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

}  // namespace

const char* op_name(Op op) {
  switch (op) {
    case Op::kLeaf: return "leaf";
    case Op::kMatmul: return "matmul";
    case Op::kRelu: return "relu";
    case Op::kSigmoid: return "sigmoid";
    case Op::kLogClamped: return "log_clamped";
    case Op::kMean: return "mean";
    case Op::kSum: return "sum";
    case Op::kAddBias: return "add_bias";
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kMul: return "mul";
    case Op::kNeg: return "neg";
    case Op::kAffine: return "affine";
    case Op::kConcatRows: return "concat_rows";
  }
  return "?";
}

const Tensor& Var::value() const {
  if (!tape_) throw ContractError("value() on an unbound Var");
  return tape_->value(*this);
}

const Tensor& Var::grad() const {
  if (!tape_) throw ContractError("grad() on an unbound Var");
  return tape_->grad(*this);
}

Var Tape::push(Op op, std::vector<std::size_t> inputs, Tensor value, double scale, double shift) {
  Node n;
  n.op = op;
  n.inputs = std::move(inputs);
  n.grad = Tensor(value.shape(), 0.0);
  n.value = std::move(value);
  n.scale = scale;
  n.shift = shift;
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

void Tape::check_owned(Var v) const {
  if (v.tape_ != this || v.id_ >= nodes_.size()) {
    throw ContractError("Var does not belong to this tape");
  }
}

const Tape::Node& Tape::node(Var v) const {
  check_owned(v);
  return nodes_[v.id_];
}

const Tensor& Tape::value(Var v) const { return node(v).value; }
const Tensor& Tape::grad(Var v) const { return node(v).grad; }
Op Tape::op(Var v) const { return node(v).op; }

Var Tape::leaf(Tensor value) { return push(Op::kLeaf, {}, std::move(value)); }

Var Tape::matmul(Var a, Var b) {
  return push(Op::kMatmul, {a.id_, b.id_}, matmul_values(node(a).value, node(b).value));
}

Var Tape::relu(Var a) {
  Tensor out = node(a).value;
  for (double& v : out.values()) v = v < 0.0 ? 0.0 : v;  // NaN passes through
  return push(Op::kRelu, {a.id_}, std::move(out));
}

Var Tape::sigmoid(Var a) {
  Tensor out = node(a).value;
  for (double& v : out.values()) v = stable_sigmoid(v);
  return push(Op::kSigmoid, {a.id_}, std::move(out));
}

Var Tape::log_clamped(Var a, double floor) {
  if (!(floor > 0.0)) throw ContractError("log_clamped floor must be positive");
  Tensor out = node(a).value;
  for (double& v : out.values()) v = std::log(std::max(v, floor));
  return push(Op::kLogClamped, {a.id_}, std::move(out), floor);
}

Var Tape::mean(Var a) {
  const Tensor& x = node(a).value;
  double s = 0.0;
  for (double v : x.values()) s += v;
  return push(Op::kMean, {a.id_}, Tensor::scalar(s / static_cast<double>(x.size())));
}

Var Tape::sum(Var a) {
  double s = 0.0;
  for (double v : node(a).value.values()) s += v;
  return push(Op::kSum, {a.id_}, Tensor::scalar(s));
}

Var Tape::add_bias(Var a, Var b) {
  const Tensor& x = node(a).value;
  const Tensor& bias = node(b).value;
  if (x.rank() != 2 || bias.rank() != 1 || bias.dim(0) != x.dim(1)) {
    throw DimensionError("add_bias shape mismatch: " + shape_to_string(x.shape()) + " + " +
                         shape_to_string(bias.shape()));
  }
  Tensor out = x;
  const std::size_t n = x.dim(1);
  for (std::size_t i = 0; i < x.dim(0); ++i)
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) += bias[j];
  return push(Op::kAddBias, {a.id_, b.id_}, std::move(out));
}

Var Tape::add(Var a, Var b) {
  const Tensor& x = node(a).value;
  const Tensor& y = node(b).value;
  require_same_shape(x, y, "add");
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += y[i];
  return push(Op::kAdd, {a.id_, b.id_}, std::move(out));
}

Var Tape::sub(Var a, Var b) {
  const Tensor& x = node(a).value;
  const Tensor& y = node(b).value;
  require_same_shape(x, y, "sub");
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= y[i];
  return push(Op::kSub, {a.id_, b.id_}, std::move(out));
}

Var Tape::mul(Var a, Var b) {
  const Tensor& x = node(a).value;
  const Tensor& y = node(b).value;
  require_same_shape(x, y, "mul");
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= y[i];
  return push(Op::kMul, {a.id_, b.id_}, std::move(out));
}

Var Tape::neg(Var a) {
  Tensor out = node(a).value;
  for (double& v : out.values()) v = -v;
  return push(Op::kNeg, {a.id_}, std::move(out));
}

Var Tape::affine(Var a, double scale, double shift) {
  Tensor out = node(a).value;
  for (double& v : out.values()) v = scale * v + shift;
  return push(Op::kAffine, {a.id_}, std::move(out), scale, shift);
}

Var Tape::concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw ContractError("concat_rows needs at least one part");
  const std::size_t cols = node(parts[0]).value.cols();
  std::size_t rows = 0;
  std::vector<std::size_t> ids;
  for (Var p : parts) {
    const Tensor& t = node(p).value;
    if (t.rank() != 2 || t.cols() != cols) {
      throw DimensionError("concat_rows part has shape " + shape_to_string(t.shape()) +
                           ", expected [?x" + std::to_string(cols) + "]");
    }
    rows += t.rows();
    ids.push_back(p.id_);
  }
  std::vector<double> values;
  values.reserve(rows * cols);
  for (Var p : parts) {
    auto v = node(p).value.values();
    values.insert(values.end(), v.begin(), v.end());
  }
  return push(Op::kConcatRows, std::move(ids), Tensor(Shape{rows, cols}, std::move(values)));
}

void Tape::backward(Var loss) {
  check_owned(loss);
  if (!nodes_[loss.id_].value.is_scalar()) {
    throw ContractError("backward() needs a scalar loss, got shape " +
                        shape_to_string(nodes_[loss.id_].value.shape()));
  }
  for (auto& n : nodes_) n.grad.fill(0.0);

  // Inputs always precede their consumers, so one reverse sweep over the
  // reachable set visits each node once, after all of its consumers.
  std::vector<char> reachable(loss.id_ + 1, 0);
  reachable[loss.id_] = 1;
  nodes_[loss.id_].grad.fill(1.0);
  for (std::size_t i = loss.id_ + 1; i-- > 0;) {
    if (!reachable[i]) continue;
    for (std::size_t in : nodes_[i].inputs) reachable[in] = 1;
    propagate(i);
  }
}

void Tape::propagate(std::size_t index) {
  const Node& n = nodes_[index];
  const Tensor& g = n.grad;
  switch (n.op) {
    case Op::kLeaf:
      return;
    case Op::kMatmul: {
      Node& a = nodes_[n.inputs[0]];
      Node& b = nodes_[n.inputs[1]];
      accumulate(a.grad, matmul_values(g, transpose_values(b.value)));
      accumulate(b.grad, matmul_values(transpose_values(a.value), g));
      return;
    }
    case Op::kRelu: {
      Node& a = nodes_[n.inputs[0]];
      for (std::size_t i = 0; i < g.size(); ++i)
        if (a.value[i] > 0.0) a.grad[i] += g[i];
      return;
    }
    case Op::kSigmoid: {
      Node& a = nodes_[n.inputs[0]];
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = n.value[i];
        a.grad[i] += g[i] * s * (1.0 - s);
      }
      return;
    }
    case Op::kLogClamped: {
      Node& a = nodes_[n.inputs[0]];
      for (std::size_t i = 0; i < g.size(); ++i)
        if (a.value[i] >= n.scale) a.grad[i] += g[i] / a.value[i];
      return;
    }
    case Op::kMean: {
      Node& a = nodes_[n.inputs[0]];
      const double share = g[0] / static_cast<double>(a.value.size());
      for (double& v : a.grad.values()) v += share;
      return;
    }
    case Op::kSum: {
      Node& a = nodes_[n.inputs[0]];
      for (double& v : a.grad.values()) v += g[0];
      return;
    }
    case Op::kAddBias: {
      Node& a = nodes_[n.inputs[0]];
      Node& b = nodes_[n.inputs[1]];
      accumulate(a.grad, g);
      const std::size_t cols = g.cols();
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < cols; ++j) b.grad[j] += g.at(i, j);
      return;
    }
    case Op::kAdd: {
      accumulate(nodes_[n.inputs[0]].grad, g);
      accumulate(nodes_[n.inputs[1]].grad, g);
      return;
    }
    case Op::kSub: {
      accumulate(nodes_[n.inputs[0]].grad, g);
      Node& b = nodes_[n.inputs[1]];
      for (std::size_t i = 0; i < g.size(); ++i) b.grad[i] -= g[i];
      return;
    }
    case Op::kMul: {
      Node& a = nodes_[n.inputs[0]];
      Node& b = nodes_[n.inputs[1]];
      for (std::size_t i = 0; i < g.size(); ++i) {
        a.grad[i] += g[i] * b.value[i];
        b.grad[i] += g[i] * a.value[i];
      }
      return;
    }
    case Op::kNeg: {
      Node& a = nodes_[n.inputs[0]];
      for (std::size_t i = 0; i < g.size(); ++i) a.grad[i] -= g[i];
      return;
    }
    case Op::kAffine: {
      Node& a = nodes_[n.inputs[0]];
      for (std::size_t i = 0; i < g.size(); ++i) a.grad[i] += n.scale * g[i];
      return;
    }
    case Op::kConcatRows: {
      std::size_t offset = 0;
      for (std::size_t in : n.inputs) {
        Node& part = nodes_[in];
        for (std::size_t i = 0; i < part.grad.size(); ++i) part.grad[i] += g[offset + i];
        offset += part.grad.size();
      }
      return;
    }
  }
}

namespace {

Tape& tape_of(Var v) {
  if (!v.valid()) throw ContractError("operation on an unbound Var");
  return *v.tape();
}

}  // namespace

Var matmul(Var a, Var b) { return tape_of(a).matmul(a, b); }
Var relu(Var a) { return tape_of(a).relu(a); }
Var sigmoid(Var a) { return tape_of(a).sigmoid(a); }
Var log_clamped(Var a, double floor) { return tape_of(a).log_clamped(a, floor); }
Var mean(Var a) { return tape_of(a).mean(a); }
Var sum(Var a) { return tape_of(a).sum(a); }
Var add_bias(Var a, Var b) { return tape_of(a).add_bias(a, b); }
Var neg(Var a) { return tape_of(a).neg(a); }
Var affine(Var a, double scale, double shift) { return tape_of(a).affine(a, scale, shift); }
Var one_minus(Var a) { return tape_of(a).affine(a, -1.0, 1.0); }

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw ContractError("concat_rows needs at least one part");
  return tape_of(parts[0]).concat_rows(parts);
}

Var operator+(Var a, Var b) { return tape_of(a).add(a, b); }
Var operator-(Var a, Var b) { return tape_of(a).sub(a, b); }
Var operator*(Var a, Var b) { return tape_of(a).mul(a, b); }
Var operator-(Var a) { return tape_of(a).neg(a); }

}  // namespace mixgan
