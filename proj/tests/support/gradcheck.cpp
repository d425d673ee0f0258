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


#include "gradcheck.hpp"

#include "magnet/autodiff.hpp"
#include "magnet/rng.hpp"

namespace magnet::testing {

namespace {

double eval_loss(const MagnetModel& model, const std::vector<const Document*>& batch) {
  Graph g;
  const auto b = model.bind_frozen(g);
  return g.value(model.batch_loss(g, b, batch, Mode::kEval, nullptr)).item();
}

}  // namespace

std::vector<GroupError> model_gradient_errors(MagnetModel& model,
                                              const std::vector<Document>& docs, double h) {
  std::vector<const Document*> batch;
  for (const auto& d : docs) batch.push_back(&d);

  model.params().zero_grad();
  {
    Graph g;
    const auto b = model.bind(g);
    g.backward(model.batch_loss(g, b, batch, Mode::kEval, nullptr));
  }

  std::vector<GroupError> out;
  for (Parameter* p : model.params().all()) {
    if (!p->trainable) continue;
    const Tensor original = p->value;
    const Tensor numeric = finite_difference_grad(
        [&](const Tensor& x) {
          p->value = x;
          return eval_loss(model, batch);
        },
        original, h);
    p->value = original;
    out.push_back({p->name, relative_error(p->grad, numeric), p->value.size()});
  }
  return out;
}

ToySetup make_toy(std::size_t num_labels, std::uint64_t seed, LayerMode mode) {
  Rng rng(seed);
  std::vector<std::string> tokens{std::string(Vocabulary::kUnkToken)};
  for (int i = 1; i < 20; ++i) tokens.push_back("t" + std::to_string(i));
  Vocabulary vocab = Vocabulary::from_tokens(tokens);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < num_labels; ++i) names.push_back("label" + std::to_string(i));
  LabelSpace labels(names);

  MagnetConfig cfg;
  cfg.vocab_size = 20;
  cfg.embed_dim = 4;
  cfg.hidden = 3;
  cfg.heads = 2;
  cfg.graph_dims = {0};
  cfg.layer_mode = mode;
  cfg.dropout = 0.0;
  cfg.seed = seed;

  // Spread-out values keep the tanh/sigmoid units away from saturation while
  // still exercising the nonlinear regime.
  Tensor token_vectors(20, 4);
  for (double& x : token_vectors.data()) x = rng.uniform(-0.8, 0.8);
  Tensor label_matrix(num_labels, 4);
  for (double& x : label_matrix.data()) x = rng.uniform(-0.8, 0.8);

  ToySetup toy{MagnetModel::create(cfg, vocab, labels, token_vectors, label_matrix, nullptr), {}};
  for (int d = 0; d < 3; ++d) {
    Document doc;
    const std::size_t len = 2 + rng.below(3);
    for (std::size_t t = 0; t < len; ++t) doc.token_ids.push_back(rng.below(20));
    for (std::size_t j = 0; j < num_labels; ++j) {
      if (rng.bernoulli(0.5)) doc.label_ids.push_back(j);
    }
    if (doc.label_ids.empty()) doc.label_ids.push_back(rng.below(num_labels));
    toy.docs.push_back(doc);
  }
  return toy;
}

}  // namespace magnet::testing
