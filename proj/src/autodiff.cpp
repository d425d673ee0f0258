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

#include "magnet/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "magnet/errors.hpp"

namespace magnet {

namespace {

[[noreturn]] void shape_mismatch(OpKind kind, const Tensor& a, const Tensor& b) {
  throw ShapeError(std::string(op_name(kind)) + ": incompatible shapes " +
                   shape_string(a) + " and " + shape_string(b));
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

// C(m x n) += A(m x k) * B(k x n); i-k-j loop order, fixed reduction order.
void gemm_acc(const Tensor& a, const Tensor& b, Tensor& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a(i, p);
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += av * b(p, j);
    }
  }
}

// C(m x n) += A(m x k) * B(n x k)^T
void gemm_nt_acc(const Tensor& a, const Tensor& b, Tensor& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a(i, p) * b(j, p);
      c(i, j) += s;
    }
  }
}

// C(k x n) += A(m x k)^T * B(m x n)
void gemm_tn_acc(const Tensor& a, const Tensor& b, Tensor& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a(i, p);
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(p, j) += av * b(i, j);
    }
  }
}

}  // namespace

std::string_view op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kMatmul: return "matmul";
    case OpKind::kAdd: return "add";
    case OpKind::kMul: return "mul";
    case OpKind::kConcat: return "concat";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kTanh: return "tanh";
    case OpKind::kRelu: return "relu";
    case OpKind::kSoftmaxRows: return "softmax-rows";
    case OpKind::kMean: return "mean";
    case OpKind::kSum: return "sum";
    case OpKind::kDropoutMaskApply: return "dropout-mask-apply";
    case OpKind::kSlice: return "slice";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kGatherRows: return "gather-rows";
    case OpKind::kScale: return "scale";
    case OpKind::kBceWithLogits: return "bce-with-logits";
  }
  return "unknown";
}

const Graph::Node& Graph::node(Var v) const {
  if (v.id >= nodes_.size()) {
    throw InvalidArgumentError("Var " + std::to_string(v.id) + " is not part of this graph");
  }
  return nodes_[v.id];
}

const Tensor& Graph::val(std::size_t id) const {
  if (id >= nodes_.size()) {
    throw InvalidArgumentError("Var " + std::to_string(id) + " is not part of this graph");
  }
  const Node& n = nodes_[id];
  return n.ref != nullptr ? *n.ref : n.value;
}

Var Graph::push(Node n) {
  const Tensor& v = n.ref != nullptr ? *n.ref : n.value;
  if (v.empty()) throw ShapeError(std::string(op_name(n.kind)) + ": empty tensor");
  if (!v.all_finite()) {
    throw NumericError(std::string(op_name(n.kind)) + ": non-finite value in " +
                       (n.kind == OpKind::kLeaf ? "input" : "output") + " " + shape_string(v));
  }
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

Var Graph::constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Graph::constant_ref(const Tensor& value) {
  Node n;
  n.ref = &value;
  return push(std::move(n));
}

Var Graph::input(Tensor value, bool requires_grad) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  return push(std::move(n));
}

Var Graph::param(Parameter& p) {
  Node n;
  n.ref = &p.value;
  n.requires_grad = p.trainable;
  if (p.trainable) {
    n.bound = &p;
    if (!p.grad.same_shape(p.value)) p.grad = Tensor(p.value.rows(), p.value.cols());
  }
  return push(std::move(n));
}

Var Graph::matmul(Var a, Var b) {
  const Tensor& x = val(a.id);
  const Tensor& y = val(b.id);
  if (x.cols() != y.rows()) shape_mismatch(OpKind::kMatmul, x, y);
  Node n;
  n.kind = OpKind::kMatmul;
  n.in0 = a.id;
  n.in1 = b.id;
  n.value = Tensor(x.rows(), y.cols());
  gemm_acc(x, y, n.value);
  n.requires_grad = node(a).requires_grad || node(b).requires_grad;
  return push(std::move(n));
}

Var Graph::add(Var a, Var b) {
  const Tensor& x = val(a.id);
  const Tensor& y = val(b.id);
  if (!x.same_shape(y)) shape_mismatch(OpKind::kAdd, x, y);
  Node n;
  n.kind = OpKind::kAdd;
  n.in0 = a.id;
  n.in1 = b.id;
  n.value = x;
  for (std::size_t i = 0; i < y.size(); ++i) n.value[i] += y[i];
  n.requires_grad = node(a).requires_grad || node(b).requires_grad;
  return push(std::move(n));
}

Var Graph::mul(Var a, Var b) {
  const Tensor& x = val(a.id);
  const Tensor& y = val(b.id);
  if (!x.same_shape(y)) shape_mismatch(OpKind::kMul, x, y);
  Node n;
  n.kind = OpKind::kMul;
  n.in0 = a.id;
  n.in1 = b.id;
  n.value = x;
  for (std::size_t i = 0; i < y.size(); ++i) n.value[i] *= y[i];
  n.requires_grad = node(a).requires_grad || node(b).requires_grad;
  return push(std::move(n));
}

Var Graph::concat(Var a, Var b, Axis axis) {
  const Tensor& x = val(a.id);
  const Tensor& y = val(b.id);
  Node n;
  n.kind = OpKind::kConcat;
  n.in0 = a.id;
  n.in1 = b.id;
  n.axis = axis;
  if (axis == Axis::kCols) {
    if (x.rows() != y.rows()) shape_mismatch(OpKind::kConcat, x, y);
    n.value = Tensor(x.rows(), x.cols() + y.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
      std::copy_n(x.row_span(r).begin(), x.cols(), n.value.row_span(r).begin());
      std::copy_n(y.row_span(r).begin(), y.cols(), n.value.row_span(r).begin() + x.cols());
    }
  } else {
    if (x.cols() != y.cols()) shape_mismatch(OpKind::kConcat, x, y);
    std::vector<double> data(x.data().begin(), x.data().end());
    data.insert(data.end(), y.data().begin(), y.data().end());
    n.value = Tensor(x.rows() + y.rows(), x.cols(), std::move(data));
  }
  n.requires_grad = node(a).requires_grad || node(b).requires_grad;
  return push(std::move(n));
}

Var Graph::sigmoid(Var x) {
  Node n;
  n.kind = OpKind::kSigmoid;
  n.in0 = x.id;
  n.value = val(x.id);
  for (double& v : n.value.data()) v = stable_sigmoid(v);
  n.requires_grad = node(x).requires_grad;
  return push(std::move(n));
}

Var Graph::tanh(Var x) {
  Node n;
  n.kind = OpKind::kTanh;
  n.in0 = x.id;
  n.value = val(x.id);
  for (double& v : n.value.data()) v = std::tanh(v);
  n.requires_grad = node(x).requires_grad;
  return push(std::move(n));
}

Var Graph::relu(Var x) {
  Node n;
  n.kind = OpKind::kRelu;
  n.in0 = x.id;
  n.value = val(x.id);
  for (double& v : n.value.data()) v = v > 0.0 ? v : 0.0;
  n.requires_grad = node(x).requires_grad;
  return push(std::move(n));
}

Var Graph::softmax_rows(Var x, const Tensor* support) {
  const Tensor& in = val(x.id);
  if (support != nullptr && !support->same_shape(in)) {
    throw ShapeError("softmax_rows: support " + shape_string(*support) + " does not match " +
                     shape_string(in));
  }
  auto kept = [&](std::size_t r, std::size_t c) { return support == nullptr || (*support)(r, c) != 0.0; };
  Node n;
  n.kind = OpKind::kSoftmaxRows;
  n.in0 = x.id;
  n.value = Tensor(in.rows(), in.cols());
  for (std::size_t r = 0; r < in.rows(); ++r) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < in.cols(); ++c) {
      if (kept(r, c)) peak = std::max(peak, in(r, c));
    }
    double total = 0.0;
    for (std::size_t c = 0; c < in.cols(); ++c) {
      if (!kept(r, c)) continue;
      n.value(r, c) = std::exp(in(r, c) - peak);
      total += n.value(r, c);
    }
    if (total == 0.0) continue;
    for (std::size_t c = 0; c < in.cols(); ++c) n.value(r, c) /= total;
  }
  n.requires_grad = node(x).requires_grad;
  return push(std::move(n));
}

Var Graph::sum(Var x) {
  double s = 0.0;
  for (double v : val(x.id).data()) s += v;
  Node n;
  n.kind = OpKind::kSum;
  n.in0 = x.id;
  n.value = Tensor::scalar(s);
  n.requires_grad = node(x).requires_grad;
  return push(std::move(n));
}

Var Graph::mean(Var x) {
  const Tensor& in = val(x.id);
  double s = 0.0;
  for (double v : in.data()) s += v;
  Node n;
  n.kind = OpKind::kMean;
  n.in0 = x.id;
  n.value = Tensor::scalar(s / static_cast<double>(in.size()));
  n.requires_grad = node(x).requires_grad;
  return push(std::move(n));
}

Var Graph::dropout(Var x, Tensor mask) {
  const Tensor& in = val(x.id);
  if (!in.same_shape(mask)) shape_mismatch(OpKind::kDropoutMaskApply, in, mask);
  Node n;
  n.kind = OpKind::kDropoutMaskApply;
  n.in0 = x.id;
  n.value = in;
  for (std::size_t i = 0; i < mask.size(); ++i) n.value[i] *= mask[i];
  n.aux = std::move(mask);
  n.requires_grad = node(x).requires_grad;
  return push(std::move(n));
}

Var Graph::slice(Var x, Axis axis, std::size_t begin, std::size_t end) {
  const Tensor& in = val(x.id);
  const std::size_t extent = axis == Axis::kRows ? in.rows() : in.cols();
  if (begin >= end || end > extent) {
    throw ShapeError("slice: range [" + std::to_string(begin) + ", " + std::to_string(end) +
                     ") out of bounds for " + shape_string(in));
  }
  Node n;
  n.kind = OpKind::kSlice;
  n.in0 = x.id;
  n.axis = axis;
  n.begin = begin;
  n.end = end;
  if (axis == Axis::kRows) {
    n.value = Tensor(end - begin, in.cols());
    std::copy_n(in.data().begin() + begin * in.cols(), (end - begin) * in.cols(),
                n.value.data().begin());
  } else {
    n.value = Tensor(in.rows(), end - begin);
    for (std::size_t r = 0; r < in.rows(); ++r) {
      std::copy_n(in.row_span(r).begin() + begin, end - begin, n.value.row_span(r).begin());
    }
  }
  n.requires_grad = node(x).requires_grad;
  return push(std::move(n));
}

Var Graph::transpose(Var x) {
  const Tensor& in = val(x.id);
  Node n;
  n.kind = OpKind::kTranspose;
  n.in0 = x.id;
  n.value = Tensor(in.cols(), in.rows());
  for (std::size_t r = 0; r < in.rows(); ++r) {
    for (std::size_t c = 0; c < in.cols(); ++c) n.value(c, r) = in(r, c);
  }
  n.requires_grad = node(x).requires_grad;
  return push(std::move(n));
}

Var Graph::gather_rows(Var table, std::vector<std::size_t> ids) {
  const Tensor& in = val(table.id);
  if (ids.empty()) throw ShapeError("gather-rows: empty index list");
  Node n;
  n.kind = OpKind::kGatherRows;
  n.in0 = table.id;
  n.value = Tensor(ids.size(), in.cols());
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] >= in.rows()) {
      throw ShapeError("gather-rows: index " + std::to_string(ids[r]) +
                       " out of range for " + shape_string(in));
    }
    std::copy_n(in.row_span(ids[r]).begin(), in.cols(), n.value.row_span(r).begin());
  }
  n.ids = std::move(ids);
  n.requires_grad = node(table).requires_grad;
  return push(std::move(n));
}

Var Graph::scale(Var x, double factor) {
  Node n;
  n.kind = OpKind::kScale;
  n.in0 = x.id;
  n.value = val(x.id);
  for (double& v : n.value.data()) v *= factor;
  n.factor = factor;
  n.requires_grad = node(x).requires_grad;
  return push(std::move(n));
}

Var Graph::bce_with_logits(Var logits, Tensor targets) {
  const Tensor& z = val(logits.id);
  if (!z.same_shape(targets)) shape_mismatch(OpKind::kBceWithLogits, z, targets);
  double loss = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) loss += softplus(z[i]) - targets[i] * z[i];
  Node n;
  n.kind = OpKind::kBceWithLogits;
  n.in0 = logits.id;
  n.value = Tensor::scalar(loss);
  n.aux = std::move(targets);
  n.requires_grad = node(logits).requires_grad;
  return push(std::move(n));
}

const Tensor& Graph::value(Var v) const { return val(v.id); }

const Tensor& Graph::grad(Var v) const {
  const Node& n = node(v);
  if (n.bound != nullptr) return n.bound->grad;
  if (n.grad.empty()) {
    const Tensor& shape = val(v.id);
    const_cast<Node&>(n).grad = Tensor(shape.rows(), shape.cols());
  }
  return n.grad;
}

bool Graph::requires_grad(Var v) const { return node(v).requires_grad; }

Tensor& Graph::grad_buffer(std::size_t id) {
  Node& n = nodes_[id];
  // Bound parameters accumulate in place across graphs until zero_grad().
  if (n.bound != nullptr) return n.bound->grad;
  if (n.grad.empty()) {
    const Tensor& shape = val(id);
    n.grad = Tensor(shape.rows(), shape.cols());
  }
  return n.grad;
}

void Graph::backward(Var root) {
  if (consumed_) throw InvalidArgumentError("backward: graph already consumed");
  const Node& r = node(root);
  if (val(root.id).size() != 1) {
    throw ShapeError("backward: root must be scalar, got " + shape_string(val(root.id)));
  }
  consumed_ = true;
  if (!r.requires_grad) return;
  grad_buffer(root.id)[0] += 1.0;
  for (std::size_t id = root.id + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.requires_grad || n.kind == OpKind::kLeaf || n.grad.empty()) continue;
    if (!n.grad.all_finite()) {
      throw NumericError(std::string(op_name(n.kind)) + ": non-finite gradient at node " +
                         std::to_string(id));
    }
    backprop_node(id);
  }
}

void Graph::backprop_node(std::size_t id) {
  Node& n = nodes_[id];
  const Tensor& g = n.grad;
  auto wants = [this](std::size_t input) { return nodes_[input].requires_grad; };

  switch (n.kind) {
    case OpKind::kLeaf:
      break;
    case OpKind::kMatmul: {
      if (wants(n.in0)) gemm_nt_acc(g, val(n.in1), grad_buffer(n.in0));
      if (wants(n.in1)) gemm_tn_acc(val(n.in0), g, grad_buffer(n.in1));
      break;
    }
    case OpKind::kAdd: {
      for (std::size_t input : {n.in0, n.in1}) {
        if (!wants(input)) continue;
        Tensor& dst = grad_buffer(input);
        for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
      }
      break;
    }
    case OpKind::kMul: {
      // in0 == in1 (x * x) receives both contributions.
      if (wants(n.in0)) {
        const Tensor& other = val(n.in1);
        Tensor& dst = grad_buffer(n.in0);
        for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i] * other[i];
      }
      if (wants(n.in1)) {
        const Tensor& other = val(n.in0);
        Tensor& dst = grad_buffer(n.in1);
        for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i] * other[i];
      }
      break;
    }
    case OpKind::kConcat: {
      const Tensor& x = val(n.in0);
      const Tensor& y = val(n.in1);
      if (n.axis == Axis::kCols) {
        if (wants(n.in0)) {
          Tensor& dst = grad_buffer(n.in0);
          for (std::size_t r = 0; r < x.rows(); ++r)
            for (std::size_t c = 0; c < x.cols(); ++c) dst(r, c) += g(r, c);
        }
        if (wants(n.in1)) {
          Tensor& dst = grad_buffer(n.in1);
          for (std::size_t r = 0; r < y.rows(); ++r)
            for (std::size_t c = 0; c < y.cols(); ++c) dst(r, c) += g(r, x.cols() + c);
        }
      } else {
        if (wants(n.in0)) {
          Tensor& dst = grad_buffer(n.in0);
          for (std::size_t i = 0; i < x.size(); ++i) dst[i] += g[i];
        }
        if (wants(n.in1)) {
          Tensor& dst = grad_buffer(n.in1);
          for (std::size_t i = 0; i < y.size(); ++i) dst[i] += g[x.size() + i];
        }
      }
      break;
    }
    case OpKind::kSigmoid: {
      Tensor& dst = grad_buffer(n.in0);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = n.value[i];
        dst[i] += g[i] * s * (1.0 - s);
      }
      break;
    }
    case OpKind::kTanh: {
      Tensor& dst = grad_buffer(n.in0);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double t = n.value[i];
        dst[i] += g[i] * (1.0 - t * t);
      }
      break;
    }
    case OpKind::kRelu: {
      Tensor& dst = grad_buffer(n.in0);
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (val(n.in0)[i] > 0.0) dst[i] += g[i];
      }
      break;
    }
    case OpKind::kSoftmaxRows: {
      Tensor& dst = grad_buffer(n.in0);
      const Tensor& y = n.value;
      for (std::size_t r = 0; r < y.rows(); ++r) {
        double dot = 0.0;
        for (std::size_t c = 0; c < y.cols(); ++c) dot += g(r, c) * y(r, c);
        for (std::size_t c = 0; c < y.cols(); ++c) dst(r, c) += y(r, c) * (g(r, c) - dot);
      }
      break;
    }
    case OpKind::kSum: {
      Tensor& dst = grad_buffer(n.in0);
      for (double& v : dst.data()) v += g[0];
      break;
    }
    case OpKind::kMean: {
      Tensor& dst = grad_buffer(n.in0);
      const double share = g[0] / static_cast<double>(dst.size());
      for (double& v : dst.data()) v += share;
      break;
    }
    case OpKind::kDropoutMaskApply: {
      Tensor& dst = grad_buffer(n.in0);
      for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i] * n.aux[i];
      break;
    }
    case OpKind::kSlice: {
      Tensor& dst = grad_buffer(n.in0);
      if (n.axis == Axis::kRows) {
        const std::size_t offset = n.begin * dst.cols();
        for (std::size_t i = 0; i < g.size(); ++i) dst[offset + i] += g[i];
      } else {
        for (std::size_t r = 0; r < g.rows(); ++r)
          for (std::size_t c = 0; c < g.cols(); ++c) dst(r, n.begin + c) += g(r, c);
      }
      break;
    }
    case OpKind::kTranspose: {
      Tensor& dst = grad_buffer(n.in0);
      for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) dst(c, r) += g(r, c);
      break;
    }
    case OpKind::kGatherRows: {
      Tensor& dst = grad_buffer(n.in0);
      for (std::size_t r = 0; r < n.ids.size(); ++r) {
        auto out = dst.row_span(n.ids[r]);
        auto in = g.row_span(r);
        for (std::size_t c = 0; c < in.size(); ++c) out[c] += in[c];
      }
      break;
    }
    case OpKind::kScale: {
      Tensor& dst = grad_buffer(n.in0);
      for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i] * n.factor;
      break;
    }
    case OpKind::kBceWithLogits: {
      Tensor& dst = grad_buffer(n.in0);
      const Tensor& z = val(n.in0);
      for (std::size_t i = 0; i < z.size(); ++i) {
        dst[i] += g[0] * (stable_sigmoid(z[i]) - n.aux[i]);
      }
      break;
    }
  }
}

Tensor finite_difference_grad(const std::function<double(const Tensor&)>& f,
                              const Tensor& x, double h) {
  if (!(h > 0.0)) throw InvalidArgumentError("finite_difference_grad: step must be positive");
  Tensor probe = x;
  Tensor out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double original = probe[i];
    probe[i] = original + h;
    const double up = f(probe);
    probe[i] = original - h;
    const double down = f(probe);
    probe[i] = original;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("finite_difference_grad: non-finite function value at entry " +
                         std::to_string(i));
    }
    out[i] = (up - down) / (2.0 * h);
  }
  return out;
}

double relative_error(const Tensor& a, const Tensor& b, double floor) {
  if (!a.same_shape(b)) throw ShapeError("relative_error: shape mismatch");
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += (a[i] - b[i]) * (a[i] - b[i]);
  const double scale = std::max({std::sqrt(squared_norm(a)), std::sqrt(squared_norm(b)), floor});
  return std::sqrt(diff) / scale;
}

}  // namespace magnet
