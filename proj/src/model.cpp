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

#include "magnet/model.hpp"

#include "magnet/errors.hpp"

namespace magnet {

Var predict_logits(Graph& g, Var feature, Var label_features) {
  const Tensor& f = g.value(feature);
  const Tensor& h = g.value(label_features);
  if (f.rows() != 1 || f.cols() != h.cols()) {
    throw ShapeError("predict_logits: feature " + shape_string(f) +
                     " does not match label features " + shape_string(h));
  }
  return g.matmul(label_features, g.transpose(feature));
}

Var bce_loss(Graph& g, Var logits, Tensor targets) {
  return g.bce_with_logits(logits, std::move(targets));
}

Tensor label_vector(const Document& doc, std::size_t num_labels) {
  Tensor y(num_labels, 1, 0.0);
  for (std::size_t id : doc.label_ids) {
    if (id >= num_labels) throw InvalidArgumentError("label id out of range");
    y[id] = 1.0;
  }
  return y;
}

std::vector<Parameter*> MagnetParams::all() {
  std::vector<Parameter*> out{&token_embeddings, &label_embeddings, &adjacency};
  for (LstmParams* dir : {&encoder.forward, &encoder.backward}) {
    out.push_back(&dir->w_ih);
    out.push_back(&dir->w_hh);
    out.push_back(&dir->bias);
  }
  for (auto& layer : layers) {
    for (auto& head : layer.heads) {
      out.push_back(&head.weight);
      out.push_back(&head.attention);
    }
  }
  return out;
}

std::vector<const Parameter*> MagnetParams::all() const {
  auto mutable_all = const_cast<MagnetParams*>(this)->all();
  return {mutable_all.begin(), mutable_all.end()};
}

void MagnetParams::zero_grad() {
  for (Parameter* p : all()) {
    if (!p->grad.same_shape(p->value)) p->grad = Tensor(p->value.rows(), p->value.cols());
    p->zero_grad();
  }
}

Tensor dropout_mask(std::size_t rows, std::size_t cols, double p, Rng& rng) {
  Tensor mask(rows, cols, 1.0);
  if (p <= 0.0) return mask;
  const double keep = 1.0 / (1.0 - p);
  for (double& m : mask.data()) m = rng.bernoulli(p) ? 0.0 : keep;
  return mask;
}

MagnetModel MagnetModel::create(const MagnetConfig& config, Vocabulary vocab, LabelSpace labels,
                                const Tensor& token_vectors, const Tensor& label_matrix,
                                const CooccurrenceStats* stats) {
  config.validate();
  const std::size_t dim = token_vectors.cols();
  if (token_vectors.rows() != vocab.size()) {
    throw ShapeError("token embedding rows (" + std::to_string(token_vectors.rows()) +
                     ") do not match vocabulary size (" + std::to_string(vocab.size()) + ")");
  }
  if (label_matrix.rows() != labels.size() || label_matrix.cols() != dim) {
    throw ShapeError("label embedding matrix " + shape_string(label_matrix) + " does not match " +
                     std::to_string(labels.size()) + " labels of width " + std::to_string(dim));
  }

  // Independent streams so that changing one component's configuration does
  // not perturb the initialization of the others.
  Rng adjacency_rng(config.seed ^ fnv1a("adjacency"));
  Rng encoder_rng(config.seed ^ fnv1a("encoder"));
  Rng graph_rng(config.seed ^ fnv1a("graph"));

  MagnetParams p;
  p.token_embeddings = Parameter("embeddings.tokens", token_vectors, config.embeddings_trainable);
  p.label_embeddings = Parameter("embeddings.labels", label_matrix, config.embeddings_trainable);
  p.adjacency = Parameter("adjacency",
                          init_adjacency(config.adjacency, labels.size(), stats, adjacency_rng),
                          config.adjacency_trainable);
  p.encoder = make_encoder_params(dim, config.hidden, encoder_rng);
  const auto widths = config.layer_widths(dim);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    p.layers.push_back(make_graph_layer("graph.layer" + std::to_string(l), widths[l], widths[l + 1],
                                        config.heads, config.layer_mode, graph_rng));
  }
  return MagnetModel(config, std::move(vocab), std::move(labels), std::move(p));
}

MagnetModel::MagnetModel(MagnetConfig config, Vocabulary vocab, LabelSpace labels,
                         MagnetParams params)
    : config_(std::move(config)),
      vocab_(std::move(vocab)),
      labels_(std::move(labels)),
      params_(std::move(params)) {
  const std::size_t n = labels_.size();
  if (params_.adjacency.value.rows() != n || params_.adjacency.value.cols() != n) {
    throw ShapeError("adjacency " + shape_string(params_.adjacency.value) + " does not match " +
                     std::to_string(n) + " labels");
  }
  if (params_.token_embeddings.value.rows() != vocab_.size()) {
    throw ShapeError("token embeddings do not match the vocabulary size");
  }
  if (params_.encoder.hidden != config_.hidden) {
    throw ShapeError("encoder hidden size " + std::to_string(params_.encoder.hidden) +
                     " does not match config hidden " + std::to_string(config_.hidden));
  }
  check_layer_chain(params_.layers, params_.label_embeddings.value.cols(), feature_dim());
  params_.zero_grad();
}

MagnetModel::Bound MagnetModel::bind(Graph& g) {
  Bound b;
  b.tokens = g.param(params_.token_embeddings);
  b.labels = g.param(params_.label_embeddings);
  b.adjacency = g.param(params_.adjacency);
  b.encoder = bind_encoder(g, params_.encoder);
  for (auto& layer : params_.layers) b.layers.push_back(bind_layer(g, layer, config_.layer_mode));
  return b;
}

MagnetModel::Bound MagnetModel::bind_frozen(Graph& g) const {
  // Frozen binding only aliases parameter values.
  auto& p = const_cast<MagnetParams&>(params_);
  Bound b;
  b.tokens = g.constant_ref(p.token_embeddings.value);
  b.labels = g.constant_ref(p.label_embeddings.value);
  b.adjacency = g.constant_ref(p.adjacency.value);
  b.encoder = bind_encoder(g, p.encoder, true);
  for (auto& layer : p.layers) b.layers.push_back(bind_layer(g, layer, config_.layer_mode, true));
  return b;
}

Var MagnetModel::label_features(Graph& g, const Bound& b) const {
  return stack_forward(g, b.labels, b.adjacency, b.layers, config_.layer_mode,
                       config_.softmax_attention);
}

Var MagnetModel::document_feature(Graph& g, const Bound& b, std::span<const std::size_t> token_ids,
                                  Mode mode, Rng* rng) const {
  if (token_ids.empty()) throw InvalidArgumentError("document has no tokens");
  const bool drop = mode == Mode::kTrain && config_.dropout > 0.0;
  if (drop && rng == nullptr) throw InvalidArgumentError("training-mode dropout needs an RNG");
  Var x = g.gather_rows(b.tokens, {token_ids.begin(), token_ids.end()});
  if (drop) x = g.dropout(x, dropout_mask(token_ids.size(), g.value(x).cols(), config_.dropout, *rng));
  Var f = encode_sequence(g, x, b.encoder, config_.pooling).feature;
  if (drop) f = g.dropout(f, dropout_mask(1, g.value(f).cols(), config_.dropout, *rng));
  return f;
}

Var MagnetModel::batch_loss(Graph& g, const Bound& b, std::span<const Document* const> docs,
                            Mode mode, Rng* rng) const {
  if (docs.empty()) throw InvalidArgumentError("batch_loss: empty batch");
  Var h = label_features(g, b);
  Var total{};
  for (std::size_t i = 0; i < docs.size(); ++i) {
    Var f = document_feature(g, b, docs[i]->token_ids, mode, rng);
    Var loss = bce_loss(g, predict_logits(g, f, h), label_vector(*docs[i], num_labels()));
    total = i == 0 ? loss : g.add(total, loss);
  }
  return docs.size() == 1 ? total : g.scale(total, 1.0 / static_cast<double>(docs.size()));
}

double MagnetModel::accumulate_batch_gradients(std::span<const Document* const> docs, Mode mode,
                                               Rng* rng) {
  if (docs.empty()) throw InvalidArgumentError("accumulate_batch_gradients: empty batch");
  const double inv = 1.0 / static_cast<double>(docs.size());

  Graph label_graph;
  const Bound lb = bind(label_graph);
  const Var h = label_features(label_graph, lb);
  const Tensor& h_value = label_graph.value(h);
  Tensor h_grad(h_value.rows(), h_value.cols(), 0.0);

  double total = 0.0;
  for (const Document* doc : docs) {
    Graph g;
    Bound b;
    b.tokens = g.param(params_.token_embeddings);
    b.encoder = bind_encoder(g, params_.encoder);
    const Var hin = g.input(h_value);
    const Var f = document_feature(g, b, doc->token_ids, mode, rng);
    const Var loss = g.scale(bce_loss(g, predict_logits(g, f, hin), label_vector(*doc, num_labels())),
                             inv);
    total += g.value(loss).item();
    g.backward(loss);
    const Tensor& dh = g.grad(hin);
    for (std::size_t k = 0; k < h_grad.size(); ++k) h_grad[k] += dh[k];
  }

  // Chain the accumulated dL/dH into the label side: d/dtheta sum(H (*) dH).
  const Var seed = label_graph.sum(label_graph.mul(h, label_graph.constant(std::move(h_grad))));
  label_graph.backward(seed);
  return total;
}

Tensor MagnetModel::label_feature_values() const {
  Graph g;
  const Bound b = bind_frozen(g);
  return g.value(label_features(g, b));
}

Tensor MagnetModel::logits(std::span<const std::size_t> token_ids,
                           const Tensor& label_features) const {
  Graph g;
  const Bound b = bind_frozen(g);
  Var f = document_feature(g, b, token_ids, Mode::kEval, nullptr);
  return g.value(predict_logits(g, f, g.constant_ref(label_features)));
}

Tensor MagnetModel::logits(std::span<const std::size_t> token_ids) const {
  return logits(token_ids, label_feature_values());
}

}  // namespace magnet
