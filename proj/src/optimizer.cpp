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


#include <cmath>

#include "magnet/errors.hpp"
#include "magnet/trainer.hpp"

namespace magnet {

double global_grad_norm(std::span<Parameter* const> params) {
  double total = 0.0;
  for (const Parameter* p : params) {
    if (p->trainable) total += squared_norm(p->grad);
  }
  return std::sqrt(total);
}

double clip_gradients(std::span<Parameter* const> params, double max_norm) {
  if (!(max_norm > 0.0)) throw InvalidArgumentError("clip_gradients: max_norm must be positive");
  const double norm = global_grad_norm(params);
  if (!std::isfinite(norm)) throw NumericError("clip_gradients: gradient norm is not finite");
  if (norm > max_norm) {
    const double factor = max_norm / norm;
    for (Parameter* p : params) {
      if (!p->trainable) continue;
      for (double& g : p->grad.data()) g *= factor;
    }
  }
  return norm;
}

Adam::Adam(double lr) {
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw InvalidArgumentError("Adam: invalid learning rate");
  state_.lr = lr;
}

void Adam::step(std::span<Parameter* const> params) {
  if (state_.m.empty()) {
    for (const Parameter* p : params) {
      state_.m.emplace_back(p->value.rows(), p->value.cols(), 0.0);
      state_.v.emplace_back(p->value.rows(), p->value.cols(), 0.0);
    }
  }
  if (state_.m.size() != params.size()) {
    throw ShapeError("Adam: parameter count changed between steps");
  }
  ++state_.t;
  const double b1 = state_.beta1, b2 = state_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state_.t));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state_.t));
  for (std::size_t s = 0; s < params.size(); ++s) {
    Parameter& p = *params[s];
    Tensor& m = state_.m[s];
    Tensor& v = state_.v[s];
    if (!m.same_shape(p.value) || !p.grad.same_shape(p.value)) {
      throw ShapeError("Adam: slot shape mismatch for " + p.name);
    }
    if (!p.trainable) continue;
    for (std::size_t k = 0; k < p.value.size(); ++k) {
      const double g = p.grad[k];
      m[k] = b1 * m[k] + (1.0 - b1) * g;
      v[k] = b2 * v[k] + (1.0 - b2) * g * g;
      const double m_hat = m[k] / c1;
      const double v_hat = v[k] / c2;
      const double next = p.value[k] - state_.lr * m_hat / (std::sqrt(v_hat) + state_.eps);
      if (!std::isfinite(next)) throw NumericError("Adam: non-finite update for " + p.name);
      p.value[k] = next;
    }
  }
}

}  // namespace magnet
