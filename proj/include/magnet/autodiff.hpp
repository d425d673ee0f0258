// Copyright 2026 The magnet Authors.
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

// Tape-based reverse-mode differentiation over a fixed primitive set.
//
// A Graph records every operation in insertion order, which is also a
// topological order; backward() walks it once in reverse. Leaves are either
// constants, owned inputs (whose gradient can be read back from the graph),
// or bound Parameters (whose gradient is accumulated into Parameter::grad).

#ifndef MAGNET_AUTODIFF_HPP_
#define MAGNET_AUTODIFF_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "magnet/tensor.hpp"

namespace magnet {

enum class OpKind {
  kLeaf,
  kMatmul,
  kAdd,
  kMul,
  kConcat,
  kSigmoid,
  kTanh,
  kRelu,
  kSoftmaxRows,
  kMean,
  kSum,
  kDropoutMaskApply,
  kSlice,
  kTranspose,
  kGatherRows,
  kScale,
  kBceWithLogits,
};

std::string_view op_name(OpKind kind);

enum class Axis { kRows = 0, kCols = 1 };

/// Handle to a node in a Graph. Only meaningful for the graph that made it.
struct Var {
  std::size_t id = 0;
};

class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;
  Graph(Graph&&) = default;
  Graph& operator=(Graph&&) = default;

  Var constant(Tensor value);
  /// Constant that aliases `value`, which must outlive the graph.
  Var constant_ref(const Tensor& value);
  Var input(Tensor value, bool requires_grad = true);
  /// Binds a parameter without copying it. Its gradient accumulates into
  /// Parameter::grad. The parameter must outlive the graph.
  Var param(Parameter& p);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var mul(Var a, Var b);
  /// Concatenation along `axis`; the other dimension must agree.
  Var concat(Var a, Var b, Axis axis = Axis::kCols);
  Var sigmoid(Var x);
  Var tanh(Var x);
  Var relu(Var x);
  /// Row-wise softmax. With `support`, entries where support is 0 are left
  /// out of the normalization and come out 0; a row with empty support is 0.
  Var softmax_rows(Var x, const Tensor* support = nullptr);
  Var mean(Var x);
  Var sum(Var x);
  /// y = x * mask, mask fixed outside the graph (already scaled by 1/(1-p)).
  Var dropout(Var x, Tensor mask);
  /// Half-open range [begin, end) along `axis`.
  Var slice(Var x, Axis axis, std::size_t begin, std::size_t end);
  Var transpose(Var x);
  Var gather_rows(Var table, std::vector<std::size_t> ids);
  Var scale(Var x, double factor);
  /// Sum over entries of softplus(z) - y*z, the negated log-likelihood of
  /// independent sigmoid outputs. `targets` must match the logits shape.
  Var bce_with_logits(Var logits, Tensor targets);

  const Tensor& value(Var v) const;
  /// Gradient of the backward root w.r.t. `v`, zero if unreached. For a
  /// bound parameter this is its accumulated Parameter::grad.
  const Tensor& grad(Var v) const;
  bool requires_grad(Var v) const;

  /// Propagates d(root)/d(node) to every node that requires grad. Root must
  /// be 1x1. A graph can be differentiated once.
  void backward(Var root);

  std::size_t size() const noexcept { return nodes_.size(); }
  bool consumed() const noexcept { return consumed_; }

 private:
  struct Node {
    OpKind kind = OpKind::kLeaf;
    std::size_t in0 = 0;
    std::size_t in1 = 0;
    Tensor value;
    Tensor grad;
    Tensor aux;                     // dropout mask or bce targets
    std::vector<std::size_t> ids;   // gather indices
    std::size_t begin = 0;          // slice range
    std::size_t end = 0;
    Axis axis = Axis::kCols;
    double factor = 1.0;
    const Tensor* ref = nullptr;    // aliased leaf value
    Parameter* bound = nullptr;
    bool requires_grad = false;
  };

  const Node& node(Var v) const;
  const Tensor& val(std::size_t id) const;
  Var push(Node n);
  Tensor& grad_buffer(std::size_t id);
  void backprop_node(std::size_t id);

  std::vector<Node> nodes_;
  bool consumed_ = false;
};

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h for every entry.
Tensor finite_difference_grad(const std::function<double(const Tensor&)>& f,
                              const Tensor& x, double h = 1e-5);

/// ||a - b|| / max(||a||, ||b||, floor), Frobenius norms.
double relative_error(const Tensor& a, const Tensor& b, double floor = 1e-8);

}  // namespace magnet

#endif  // MAGNET_AUTODIFF_HPP_
