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

// Label-side graph network: learnable adjacency, multi-head graph attention
// layers and the plain graph-convolution variant.
//
// The graph over labels is dense. In attention mode a layer computes, per
// head k,
//
//   Z_k      = H W_k
//   e_k[i,j] = relu(a_k^T [Z_k[i] ; Z_k[j]])
//   alpha_k  = A (*) softmax_rows(e_k)         (or A (*) e_k without softmax)
//
// where the row softmax covers only the support {j : A[i][j] != 0}.
//   H'       = tanh(mean_k alpha_k Z_k)
//
// and in convolution mode H' = tanh(A H W).

#ifndef MAGNET_LABELGRAPH_HPP_
#define MAGNET_LABELGRAPH_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "magnet/autodiff.hpp"
#include "magnet/config.hpp"
#include "magnet/corpus.hpp"
#include "magnet/rng.hpp"

namespace magnet {

/// identity: I. xavier: uniform in +-sqrt(6)/sqrt(2n). cooccurrence:
/// A[i][j] = C[i][j] / freq[i].
Tensor init_adjacency(AdjacencyInit scheme, std::size_t n, const CooccurrenceStats* stats, Rng& rng);

struct GatHeadParams {
  Parameter weight;     // d_in x d_out
  Parameter attention;  // 2*d_out x 1: [a_src ; a_dst]
};

/// A convolution layer keeps exactly one head and ignores its attention vector.
struct GraphLayerParams {
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  std::vector<GatHeadParams> heads;
};

GraphLayerParams make_graph_layer(const std::string& prefix, std::size_t d_in, std::size_t d_out,
                                  std::size_t heads, LayerMode mode, Rng& rng);

struct HeadVars {
  Var weight;
  Var attention;
};

struct LayerVars {
  std::vector<HeadVars> heads;
};

/// `frozen` binds the weights as aliased constants (no gradient).
LayerVars bind_layer(Graph& g, GraphLayerParams& p, LayerMode mode, bool frozen = false);

/// Raw pairwise scores e[i][j] = relu(a^T [Z_i ; Z_j]) for projected
/// features Z = H W (n x d_head) and attention vector a (2*d_head x 1).
Var attention_scores(Graph& g, Var projected, Var attention);

/// alpha = A (*) softmax_rows(e) over the support of A, or A (*) e when
/// `softmax` is false. Entries where A is exactly 0 get no gradient.
Var normalize_and_mask(Graph& g, Var scores, Var adjacency, bool softmax = true);

Var gat_layer_forward(Graph& g, Var features, Var adjacency, const LayerVars& layer,
                      bool softmax = true);

/// tanh(A H W).
Var gcn_layer_forward(Graph& g, Var features, Var adjacency, Var weight);

/// Applies the layers in order, feeding each output to the next layer.
/// Returns the attended label features (n x d_last).
Var stack_forward(Graph& g, Var label_embeddings, Var adjacency,
                  const std::vector<LayerVars>& layers, LayerMode mode, bool softmax = true);

/// Checks that layer widths chain from `input_dim` to `output_dim`.
void check_layer_chain(const std::vector<GraphLayerParams>& layers, std::size_t input_dim,
                       std::size_t output_dim);

}  // namespace magnet

#endif  // MAGNET_LABELGRAPH_HPP_
