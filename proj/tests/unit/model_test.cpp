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


#include <algorithm>
#include <cmath>
#include <utility>

#include "doctest.h"
#include "gradcheck.hpp"
#include "magnet/errors.hpp"
#include "magnet/model.hpp"
#include "magnet/rng.hpp"

using namespace magnet;

namespace {

Tensor random_tensor(std::size_t r, std::size_t c, Rng& rng) {
  Tensor t(r, c);
  for (double& x : t.data()) x = rng.uniform(-1.0, 1.0);
  return t;
}

double neg_log_likelihood(const Tensor& logits, const Tensor& y) {
  Graph g;
  return g.value(bce_loss(g, g.constant(logits), y)).item();
}

std::vector<const Document*> pointers(const std::vector<Document>& docs) {
  std::vector<const Document*> out;
  for (const auto& d : docs) out.push_back(&d);
  return out;
}

}  // namespace

TEST_CASE("predict_logits") {
  Rng rng(1);
  SUBCASE("zero label features give zero logits") {
    Graph g;
    const Tensor z = g.value(predict_logits(g, g.constant(random_tensor(1, 4, rng)), g.constant(Tensor(3, 4))));
    for (double x : z.data()) CHECK(x == 0.0);
  }
  SUBCASE("basis row picks a feature entry") {
    Tensor h(2, 3);
    h(1, 0) = 1.0;
    Graph g;
    const Tensor z = g.value(predict_logits(g, g.constant(Tensor::row({3, 5, 7})), g.constant(h)));
    CHECK(z[1] == 3.0);
  }
  SUBCASE("per-label dot product loop") {
    const Tensor f = random_tensor(1, 6, rng), h = random_tensor(5, 6, rng);
    Graph g;
    const Tensor z = g.value(predict_logits(g, g.constant(f), g.constant(h)));
    REQUIRE(z.rows() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      double s = 0;
      for (std::size_t k = 0; k < 6; ++k) s += h(i, k) * f[k];
      CHECK(std::abs(z[i] - s) < 1e-12);
    }
  }
  SUBCASE("width mismatch") {
    Graph g;
    CHECK_THROWS_AS(predict_logits(g, g.constant(Tensor(1, 3)), g.constant(Tensor(2, 4))), ShapeError);
  }
}

TEST_CASE("bce loss values") {
  const Tensor zero(4, 1);
  CHECK(neg_log_likelihood(zero, Tensor::from_rows({{1}, {0}, {1}, {1}})) ==
        doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-14));
  CHECK(neg_log_likelihood(Tensor(3, 1, 50.0), Tensor(3, 1, 1.0)) < 1e-20);
  CHECK(neg_log_likelihood(Tensor::from_rows({{2}, {-1}}), Tensor::from_rows({{1}, {0}})) ==
        doctest::Approx(0.4402).epsilon(1e-4));
  const double exact = std::log1p(std::exp(-2.0)) + std::log1p(std::exp(-1.0));
  CHECK(neg_log_likelihood(Tensor::from_rows({{2}, {-1}}), Tensor::from_rows({{1}, {0}})) ==
        doctest::Approx(exact).epsilon(1e-15));
  CHECK(std::isfinite(neg_log_likelihood(Tensor(2, 1, 800.0), Tensor(2, 1, 0.0))));
  CHECK(neg_log_likelihood(Tensor::from_rows({{0.3}, {-2.0}}), Tensor::from_rows({{0}, {1}})) > 0.0);
}

TEST_CASE("eval-mode logits are repeatable and p = 0 training equals eval") {
  auto toy = testing::make_toy(3, 2);
  const auto ids = toy.docs[0].token_ids;
  CHECK(toy.model.logits(ids) == toy.model.logits(ids));
  Graph g;
  const auto b = toy.model.bind_frozen(g);
  Rng rng(1);
  const Tensor f_train = g.value(toy.model.document_feature(g, b, ids, Mode::kTrain, &rng));
  const Tensor f_eval = g.value(toy.model.document_feature(g, b, ids, Mode::kEval, nullptr));
  CHECK(f_train == f_eval);
}

TEST_CASE("end-to-end gradients (3 labels, h 3, d_e 4, K 2, two layers)") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto toy = testing::make_toy(3, seed);
    for (const auto& e : testing::model_gradient_errors(toy.model, toy.docs)) {
      CAPTURE(e.name);
      CHECK(e.relative_error < 1e-4);
    }
  }
}

TEST_CASE("per-document gradient accumulation equals the batch graph") {
  auto toy = testing::make_toy(4, 7);
  const auto batch = pointers(toy.docs);
  toy.model.params().zero_grad();
  double graph_loss = 0;
  {
    Graph g;
    const auto b = toy.model.bind(g);
    const Var loss = toy.model.batch_loss(g, b, batch, Mode::kEval, nullptr);
    graph_loss = g.value(loss).item();
    g.backward(loss);
  }
  std::vector<Tensor> reference;
  for (Parameter* p : toy.model.params().all()) reference.push_back(p->grad);
  toy.model.params().zero_grad();
  const double acc_loss = toy.model.accumulate_batch_gradients(batch, Mode::kEval, nullptr);
  CHECK(acc_loss == doctest::Approx(graph_loss).epsilon(1e-13));
  const auto all = toy.model.params().all();
  for (std::size_t s = 0; s < all.size(); ++s) {
    CAPTURE(all[s]->name);
    CHECK(relative_error(all[s]->grad, reference[s]) < 1e-12);
  }
}

TEST_CASE("a small gradient step lowers the loss of that example") {
  auto toy = testing::make_toy(3, 4);
  const std::vector<const Document*> one{&toy.docs[0]};
  auto loss = [&] {
    Graph g;
    const auto b = toy.model.bind_frozen(g);
    return g.value(toy.model.batch_loss(g, b, one, Mode::kEval, nullptr)).item();
  };
  const double before = loss();
  toy.model.params().zero_grad();
  toy.model.accumulate_batch_gradients(one, Mode::kEval, nullptr);
  for (Parameter* p : toy.model.params().all()) {
    for (std::size_t k = 0; k < p->value.size(); ++k) p->value[k] -= 1e-4 * p->grad[k];
  }
  CHECK(before - loss() >= -1e-12);
  CHECK(loss() < before);
}

TEST_CASE("dropout masks") {
  Rng rng(3);
  const Tensor m = dropout_mask(200, 50, 0.5, rng);
  std::size_t zeros = 0;
  for (double x : m.data()) {
    CHECK((x == 0.0 || x == 2.0));
    zeros += x == 0.0;
  }
  CHECK(zeros > 4500);
  CHECK(zeros < 5500);
  const Tensor off = dropout_mask(3, 3, 0.0, rng);
  for (double x : off.data()) CHECK(x == 1.0);
}

TEST_CASE("training-mode dropout changes the feature and needs an RNG") {
  auto toy = testing::make_toy(3, 5);
  MagnetConfig cfg = toy.model.config();
  cfg.dropout = 0.5;
  const auto& p = toy.model.params();
  MagnetModel m(cfg, toy.model.vocab(), toy.model.labels(), p);
  Graph g;
  const auto b = m.bind_frozen(g);
  CHECK_THROWS_AS(m.document_feature(g, b, toy.docs[0].token_ids, Mode::kTrain, nullptr),
                  InvalidArgumentError);
  Rng rng(1);
  const Tensor a = g.value(m.document_feature(g, b, toy.docs[0].token_ids, Mode::kTrain, &rng));
  const Tensor e = g.value(m.document_feature(g, b, toy.docs[0].token_ids, Mode::kEval, nullptr));
  CHECK_FALSE(a == e);
}

TEST_CASE("assembly checks shapes") {
  auto toy = testing::make_toy(3, 6);
  MagnetParams p = toy.model.params();
  p.adjacency.value = Tensor(4, 4);
  CHECK_THROWS_AS(MagnetModel(toy.model.config(), toy.model.vocab(), toy.model.labels(), p), ShapeError);
  MagnetConfig cfg = toy.model.config();
  cfg.hidden = 5;
  CHECK_THROWS_AS(MagnetModel(cfg, toy.model.vocab(), toy.model.labels(), toy.model.params()), ShapeError);
}

TEST_CASE("parameter names are canonical and unique") {
  auto toy = testing::make_toy(3, 1);
  std::vector<std::string> names;
  for (const Parameter* p : std::as_const(toy.model.params()).all()) names.push_back(p->name);
  CHECK(names.front() == "embeddings.tokens");
  CHECK(names[1] == "embeddings.labels");
  CHECK(names[2] == "adjacency");
  std::vector<std::string> sorted = names;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  CHECK(std::find(names.begin(), names.end(), "graph.layer1.head0.attention") != names.end());
}
