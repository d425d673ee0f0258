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
#include <numeric>
#include <random>

#include "doctest.h"
#include "magnet/errors.hpp"
#include "magnet/metrics.hpp"

using namespace magnet;

namespace {

LabelMatrix matrix(std::initializer_list<std::initializer_list<int>> rows) {
  LabelMatrix m;
  for (const auto& r : rows) {
    m.cols = r.size();
    for (int v : r) m.cells.push_back(static_cast<std::uint8_t>(v));
    ++m.rows;
  }
  return m;
}

// Independent brute-force F1 and Hamming loss straight from the cells.
std::pair<double, double> brute_force(const LabelMatrix& y, const LabelMatrix& z) {
  double tp = 0, fp = 0, fn = 0, wrong = 0;
  for (std::size_t i = 0; i < y.rows; ++i) {
    for (std::size_t j = 0; j < y.cols; ++j) {
      tp += y(i, j) && z(i, j);
      fp += !y(i, j) && z(i, j);
      fn += y(i, j) && !z(i, j);
      wrong += y(i, j) != z(i, j);
    }
  }
  const double f1 = tp + fp + fn == 0 ? 0.0 : 2 * tp / (2 * tp + fp + fn);
  return {f1, wrong / static_cast<double>(y.rows * y.cols)};
}

LabelMatrix random_matrix(std::size_t n, std::size_t l, double density, std::mt19937_64& rng) {
  LabelMatrix m(n, l);
  std::bernoulli_distribution bit(density);
  for (auto& c : m.cells) c = bit(rng) ? 1 : 0;
  return m;
}

}  // namespace

TEST_CASE("worked examples") {
  const LabelMatrix y = matrix({{1, 0, 1}, {0, 1, 0}});
  const LabelMatrix z = matrix({{1, 0, 0}, {0, 1, 1}});
  const auto t = confusion_totals(y, z);
  CHECK(micro_f1(t) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(hamming_loss(y, z) == doctest::Approx(2.0 / 6.0).epsilon(1e-15));

  const LabelMatrix y2 = matrix({{1, 1, 0, 0}});
  const LabelMatrix z2 = matrix({{1, 1, 1, 0}});
  CHECK(micro_f1(confusion_totals(y2, z2)) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(hamming_loss(y2, z2) == doctest::Approx(0.25).epsilon(1e-15));

  const LabelMatrix y3 = matrix({{1, 0}, {1, 1}});
  const LabelMatrix z3 = matrix({{1, 0}, {0, 0}});
  CHECK(micro_scores(confusion_totals(y3, z3)).precision == 1.0);
  CHECK(micro_scores(confusion_totals(y3, z3)).recall == doctest::Approx(1.0 / 3.0));
  CHECK(micro_f1(confusion_totals(y3, z3)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(hamming_loss(matrix({{1, 0, 1, 1}}), matrix({{1, 1, 1, 1}})) == 0.25);
  CHECK(hamming_loss(matrix({{1, 0, 0}, {0, 1, 0}}), matrix({{1, 0, 0}, {0, 0, 0}})) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("perfect, complement and empty predictions") {
  const LabelMatrix y = matrix({{1, 0, 1}, {0, 1, 1}});
  CHECK(micro_f1(confusion_totals(y, y)) == 1.0);
  CHECK(hamming_loss(y, y) == 0.0);
  LabelMatrix c = y;
  for (auto& v : c.cells) v = 1 - v;
  CHECK(micro_f1(confusion_totals(y, c)) == 0.0);
  CHECK(hamming_loss(y, c) == 1.0);
  const LabelMatrix none(2, 3);
  bool degenerate = true;
  CHECK(micro_scores(confusion_totals(y, none), &degenerate).f1 == 0.0);
  CHECK_FALSE(degenerate);
}

TEST_CASE("no positives anywhere is degenerate with F1 0") {
  const LabelMatrix zero(3, 4);
  bool degenerate = false;
  const auto s = micro_scores(confusion_totals(zero, zero), &degenerate);
  CHECK(degenerate);
  CHECK(s.f1 == 0.0);
  CHECK(s.precision == 0.0);
  CHECK(s.recall == 0.0);
  CHECK(hamming_loss(zero, zero) == 0.0);
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(confusion_totals(LabelMatrix(2, 3), LabelMatrix(2, 4)), ShapeError);
  CHECK_THROWS_AS(hamming_loss(LabelMatrix(2, 3), LabelMatrix(3, 3)), ShapeError);
  CHECK_THROWS_AS(hamming_loss(LabelMatrix(), LabelMatrix()), ShapeError);
  LabelMatrix m;
  append_binarized(m, Tensor(3, 1, 1.0));
  CHECK_THROWS_AS(append_binarized(m, Tensor(2, 1)), ShapeError);
}

TEST_CASE("binarization threshold is strictly positive") {
  LabelMatrix m;
  append_binarized(m, Tensor::from_rows({{0.0}, {1e-300}, {-1e-300}, {5.0}}));
  CHECK(m.rows == 1);
  CHECK(m.cols == 4);
  CHECK(m.cells == std::vector<std::uint8_t>{0, 1, 0, 1});
}

TEST_CASE("random pairs match a brute-force count") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  std::uniform_real_distribution<double> density(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = size(rng), l = size(rng);
    const LabelMatrix y = random_matrix(n, l, density(rng), rng);
    const LabelMatrix z = random_matrix(n, l, density(rng), rng);
    const auto [f1, hl] = brute_force(y, z);
    const auto s = micro_scores(confusion_totals(y, z));
    REQUIRE(std::abs(s.f1 - f1) < 1e-12);
    REQUIRE(std::abs(hamming_loss(y, z) - hl) < 1e-12);
    if (s.precision + s.recall > 0) {
      REQUIRE(std::abs(s.f1 - 2 * s.precision * s.recall / (s.precision + s.recall)) < 1e-12);
    }
  }
}

TEST_CASE("row and column permutations leave the scores unchanged") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const LabelMatrix y = random_matrix(9, 6, 0.4, rng);
    const LabelMatrix z = random_matrix(9, 6, 0.4, rng);
    std::vector<std::size_t> rows(9), cols(6);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    std::shuffle(cols.begin(), cols.end(), rng);
    LabelMatrix yp(9, 6), zp(9, 6);
    for (std::size_t i = 0; i < 9; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        yp(i, j) = y(rows[i], cols[j]);
        zp(i, j) = z(rows[i], cols[j]);
      }
    }
    CHECK(micro_f1(confusion_totals(y, z)) == micro_f1(confusion_totals(yp, zp)));
    CHECK(hamming_loss(y, z) == hamming_loss(yp, zp));
  }
}

TEST_CASE("hand examples from totals and cells") {
  ConfusionTotals t;
  t.tp = {2, 1};
  t.fp = {1, 0};
  t.fn = {0, 1};
  t.num_labels = 2;
  CHECK(micro_f1(t) == 0.75);
  CHECK(hamming_loss(matrix({{1, 0, 0}, {0, 1, 1}}), matrix({{1, 0, 1}, {0, 1, 1}})) == 1.0 / 6.0);
}
