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

// Bidirectional LSTM sentence encoder.

#ifndef MAGNET_ENCODER_HPP_
#define MAGNET_ENCODER_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "magnet/autodiff.hpp"
#include "magnet/config.hpp"
#include "magnet/rng.hpp"

namespace magnet {

/// One direction. Gate blocks are stacked in the order input, forget,
/// candidate, output along the 4h axis.
struct LstmParams {
  Parameter w_ih;  // 4h x d_e
  Parameter w_hh;  // 4h x h
  Parameter bias;  // 1 x 4h
};

struct EncoderParams {
  std::size_t input_dim = 0;
  std::size_t hidden = 0;
  LstmParams forward;
  LstmParams backward;
};

/// Xavier-uniform weights, zero biases except the forget slice at 1.0.
LstmParams make_lstm_params(const std::string& prefix, std::size_t input_dim, std::size_t hidden,
                            Rng& rng);
EncoderParams make_encoder_params(std::size_t input_dim, std::size_t hidden, Rng& rng);

/// Graph-side handles for one direction: weights are transposed once per graph.
struct LstmVars {
  Var w_ih_t;  // d_e x 4h
  Var w_hh_t;  // h x 4h
  Var bias;    // 1 x 4h
  std::size_t hidden = 0;
};

struct EncoderVars {
  LstmVars forward;
  LstmVars backward;
};

/// `frozen` binds the weights as aliased constants (no gradient).
LstmVars bind_lstm(Graph& g, LstmParams& p, bool frozen = false);
EncoderVars bind_encoder(Graph& g, EncoderParams& p, bool frozen = false);

struct LstmState {
  Var h;  // 1 x h
  Var c;  // 1 x h
};

LstmState zero_state(Graph& g, std::size_t hidden);

/// One LSTM step on input row x_t (1 x d_e).
LstmState lstm_step(Graph& g, Var x_t, LstmState prev, const LstmVars& p);

struct EncodedSequence {
  Var feature;              // 1 x 2h
  std::vector<Var> states;  // per-token [h_fwd ; h_bwd], 1 x 2h; filled on request
};

/// Runs the forward LSTM left to right and the backward LSTM right to left
/// over `embeddings` (T x d_e). The last-state feature is
/// [h_fwd(T) ; h_bwd(1)]; mean pooling averages the per-token states.
EncodedSequence encode_sequence(Graph& g, Var embeddings, const EncoderVars& p,
                                Pooling pooling = Pooling::kLastState, bool keep_states = false);

}  // namespace magnet

#endif  // MAGNET_ENCODER_HPP_
