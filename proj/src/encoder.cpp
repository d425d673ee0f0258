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

#include "magnet/encoder.hpp"

#include <cmath>

#include "magnet/errors.hpp"
#include "magnet/init.hpp"

namespace magnet {

LstmParams make_lstm_params(const std::string& prefix, std::size_t input_dim, std::size_t hidden,
                            Rng& rng) {
  const std::size_t gates = 4 * hidden;
  LstmParams p;
  p.w_ih = Parameter(prefix + ".w_ih", xavier_uniform(gates, input_dim, rng));
  p.w_hh = Parameter(prefix + ".w_hh", xavier_uniform(gates, hidden, rng));
  Tensor bias(1, gates, 0.0);
  for (std::size_t k = hidden; k < 2 * hidden; ++k) bias[k] = 1.0;
  p.bias = Parameter(prefix + ".bias", std::move(bias));
  return p;
}

EncoderParams make_encoder_params(std::size_t input_dim, std::size_t hidden, Rng& rng) {
  if (input_dim == 0 || hidden == 0) throw ConfigError("encoder dimensions must be positive");
  EncoderParams p;
  p.input_dim = input_dim;
  p.hidden = hidden;
  p.forward = make_lstm_params("encoder.forward", input_dim, hidden, rng);
  p.backward = make_lstm_params("encoder.backward", input_dim, hidden, rng);
  return p;
}

LstmVars bind_lstm(Graph& g, LstmParams& p, bool frozen) {
  auto leaf = [&](Parameter& q) { return frozen ? g.constant_ref(q.value) : g.param(q); };
  LstmVars v;
  v.w_ih_t = g.transpose(leaf(p.w_ih));
  v.w_hh_t = g.transpose(leaf(p.w_hh));
  v.bias = leaf(p.bias);
  v.hidden = p.w_hh.value.cols();
  return v;
}

EncoderVars bind_encoder(Graph& g, EncoderParams& p, bool frozen) {
  return {bind_lstm(g, p.forward, frozen), bind_lstm(g, p.backward, frozen)};
}

LstmState zero_state(Graph& g, std::size_t hidden) {
  const Var zero = g.constant(Tensor(1, hidden, 0.0));
  return {zero, zero};
}

LstmState lstm_step(Graph& g, Var x_t, LstmState prev, const LstmVars& p) {
  const std::size_t h = p.hidden;
  Var pre = g.add(g.add(g.matmul(x_t, p.w_ih_t), g.matmul(prev.h, p.w_hh_t)), p.bias);
  Var in_gate = g.sigmoid(g.slice(pre, Axis::kCols, 0, h));
  Var forget_gate = g.sigmoid(g.slice(pre, Axis::kCols, h, 2 * h));
  Var candidate = g.tanh(g.slice(pre, Axis::kCols, 2 * h, 3 * h));
  Var out_gate = g.sigmoid(g.slice(pre, Axis::kCols, 3 * h, 4 * h));
  Var c = g.add(g.mul(forget_gate, prev.c), g.mul(in_gate, candidate));
  Var hidden = g.mul(out_gate, g.tanh(c));
  if (!g.value(c).all_finite() || !g.value(hidden).all_finite()) {
    throw NumericError("lstm_step: non-finite state");
  }
  return {hidden, c};
}

EncodedSequence encode_sequence(Graph& g, Var embeddings, const EncoderVars& p, Pooling pooling,
                                bool keep_states) {
  const std::size_t steps = g.value(embeddings).rows();
  if (steps == 0) throw ShapeError("encode_sequence: empty sequence");
  const bool need_states = keep_states || pooling == Pooling::kMean;

  std::vector<Var> rows(steps);
  for (std::size_t t = 0; t < steps; ++t) rows[t] = g.slice(embeddings, Axis::kRows, t, t + 1);

  std::vector<Var> fwd(steps), bwd(steps);
  LstmState state = zero_state(g, p.forward.hidden);
  for (std::size_t t = 0; t < steps; ++t) {
    state = lstm_step(g, rows[t], state, p.forward);
    fwd[t] = state.h;
  }
  state = zero_state(g, p.backward.hidden);
  for (std::size_t t = steps; t-- > 0;) {
    state = lstm_step(g, rows[t], state, p.backward);
    bwd[t] = state.h;
  }

  EncodedSequence out;
  if (need_states) {
    out.states.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) out.states.push_back(g.concat(fwd[t], bwd[t]));
  }
  if (pooling == Pooling::kLastState) {
    out.feature = g.concat(fwd[steps - 1], bwd[0]);
  } else {
    Var total = out.states[0];
    for (std::size_t t = 1; t < steps; ++t) total = g.add(total, out.states[t]);
    out.feature = g.scale(total, 1.0 / static_cast<double>(steps));
  }
  if (!keep_states) out.states.clear();
  return out;
}

}  // namespace magnet
