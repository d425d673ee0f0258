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

#include "magnet/labelgraph.hpp"

#include "magnet/errors.hpp"
#include "magnet/init.hpp"

namespace magnet {

Tensor init_adjacency(AdjacencyInit scheme, std::size_t n, const CooccurrenceStats* stats, Rng& rng) {
  if (n == 0) throw InvalidArgumentError("init_adjacency: n must be positive");
  switch (scheme) {
    case AdjacencyInit::kIdentity:
      return Tensor::identity(n);
    case AdjacencyInit::kXavier:
      return xavier_uniform(n, n, rng);
    case AdjacencyInit::kCooccurrence: {
      if (stats == nullptr) {
        throw InvalidArgumentError("init_adjacency: cooccurrence scheme requires label statistics");
      }
      if (stats->n != n) {
        throw InvalidArgumentError("init_adjacency: statistics cover " + std::to_string(stats->n) +
                                   " labels, expected " + std::to_string(n));
      }
      Tensor a(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        if (stats->freq[i] == 0) {
          throw InvalidArgumentError("init_adjacency: label " + std::to_string(i) + " has zero frequency");
        }
        const double f = static_cast<double>(stats->freq[i]);
        for (std::size_t j = 0; j < n; ++j) a(i, j) = static_cast<double>(stats->count(i, j)) / f;
      }
      return a;
    }
  }
  throw InvalidArgumentError("init_adjacency: unknown scheme");
}

GraphLayerParams make_graph_layer(const std::string& prefix, std::size_t d_in, std::size_t d_out,
                                  std::size_t heads, LayerMode mode, Rng& rng) {
  if (heads == 0) throw ConfigError("graph layer needs at least one head");
  GraphLayerParams layer;
  layer.d_in = d_in;
  layer.d_out = d_out;
  const std::size_t count = mode == LayerMode::kGcn ? 1 : heads;
  for (std::size_t k = 0; k < count; ++k) {
    const std::string head = prefix + ".head" + std::to_string(k);
    GatHeadParams h;
    h.weight = Parameter(head + ".weight", xavier_uniform(d_in, d_out, rng));
    h.attention = Parameter(head + ".attention", xavier_uniform(2 * d_out, 1, rng));
    layer.heads.push_back(std::move(h));
  }
  return layer;
}

LayerVars bind_layer(Graph& g, GraphLayerParams& p, LayerMode mode, bool frozen) {
  auto leaf = [&](Parameter& q) { return frozen ? g.constant_ref(q.value) : g.param(q); };
  LayerVars v;
  for (auto& head : p.heads) {
    HeadVars h;
    h.weight = leaf(head.weight);
    // Convolution layers leave the attention vector out of the graph.
    h.attention = mode == LayerMode::kGat ? leaf(head.attention) : h.weight;
    v.heads.push_back(h);
  }
  return v;
}

Var attention_scores(Graph& g, Var projected, Var attention) {
  const std::size_t n = g.value(projected).rows();
  const std::size_t d = g.value(projected).cols();
  if (g.value(attention).rows() != 2 * d || g.value(attention).cols() != 1) {
    throw ShapeError("attention_scores: attention vector " + shape_string(g.value(attention)) +
                     " does not match projected features " + shape_string(g.value(projected)));
  }
  Var src = g.matmul(projected, g.slice(attention, Axis::kRows, 0, d));      // n x 1
  Var dst = g.matmul(projected, g.slice(attention, Axis::kRows, d, 2 * d));  // n x 1
  Var ones_row = g.constant(Tensor(1, n, 1.0));
  Var ones_col = g.constant(Tensor(n, 1, 1.0));
  Var pairwise = g.add(g.matmul(src, ones_row), g.matmul(ones_col, g.transpose(dst)));
  return g.relu(pairwise);
}

Var normalize_and_mask(Graph& g, Var scores, Var adjacency, bool softmax) {
  // The softmax runs over the neighbours j with A[i][j] != 0, so under A = I
  // each label attends only to itself with weight 1.
  Var weights = softmax ? g.softmax_rows(scores, &g.value(adjacency)) : scores;
  return g.mul(adjacency, weights);
}

Var gat_layer_forward(Graph& g, Var features, Var adjacency, const LayerVars& layer, bool softmax) {
  if (layer.heads.empty()) throw ShapeError("gat_layer_forward: layer has no heads");
  Var total{};
  for (std::size_t k = 0; k < layer.heads.size(); ++k) {
    const HeadVars& head = layer.heads[k];
    Var projected = g.matmul(features, head.weight);
    Var alpha = normalize_and_mask(g, attention_scores(g, projected, head.attention), adjacency, softmax);
    Var message = g.matmul(alpha, projected);
    total = k == 0 ? message : g.add(total, message);
  }
  if (layer.heads.size() > 1) total = g.scale(total, 1.0 / static_cast<double>(layer.heads.size()));
  return g.tanh(total);
}

Var gcn_layer_forward(Graph& g, Var features, Var adjacency, Var weight) {
  return g.tanh(g.matmul(adjacency, g.matmul(features, weight)));
}

Var stack_forward(Graph& g, Var label_embeddings, Var adjacency,
                  const std::vector<LayerVars>& layers, LayerMode mode, bool softmax) {
  if (layers.empty()) throw ShapeError("stack_forward: no graph layers");
  Var h = label_embeddings;
  for (const auto& layer : layers) {
    h = mode == LayerMode::kGat ? gat_layer_forward(g, h, adjacency, layer, softmax)
                                : gcn_layer_forward(g, h, adjacency, layer.heads.at(0).weight);
  }
  return h;
}

void check_layer_chain(const std::vector<GraphLayerParams>& layers, std::size_t input_dim,
                       std::size_t output_dim) {
  if (layers.empty()) throw ShapeError("graph stack has no layers");
  std::size_t width = input_dim;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].d_in != width) {
      throw ShapeError("graph layer " + std::to_string(l) + " expects width " +
                       std::to_string(layers[l].d_in) + ", previous stage emits " + std::to_string(width));
    }
    width = layers[l].d_out;
  }
  if (width != output_dim) {
    throw ShapeError("graph stack emits width " + std::to_string(width) +
                     ", encoder feature width is " + std::to_string(output_dim));
  }
}

}  // namespace magnet
