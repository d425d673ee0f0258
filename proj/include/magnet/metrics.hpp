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

#ifndef MAGNET_METRICS_HPP_
#define MAGNET_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "magnet/tensor.hpp"

namespace magnet {

/// Row-major N x L 0/1 matrix of targets or predictions.
struct LabelMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> cells;

  LabelMatrix() = default;
  LabelMatrix(std::size_t n, std::size_t l) : rows(n), cols(l), cells(n * l, 0) {}

  std::uint8_t operator()(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
  std::uint8_t& operator()(std::size_t i, std::size_t j) { return cells[i * cols + j]; }
};

/// Appends one prediction row: label j is predicted iff logit_j > 0.
void append_binarized(LabelMatrix& m, const Tensor& logits);

struct ConfusionTotals {
  std::vector<std::uint64_t> tp, fp, fn;
  std::size_t num_labels = 0;
  std::size_t num_examples = 0;
};

ConfusionTotals confusion_totals(const LabelMatrix& targets, const LabelMatrix& predictions);

struct MicroScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// F1 = sum 2tp / sum (2tp + fp + fn). An all-zero denominator yields 0 and
/// sets `degenerate`.
MicroScores micro_scores(const ConfusionTotals& totals, bool* degenerate = nullptr);
double micro_f1(const ConfusionTotals& totals);

/// Fraction of the N x L cells where prediction and target differ.
double hamming_loss(const LabelMatrix& targets, const LabelMatrix& predictions);

}  // namespace magnet

#endif  // MAGNET_METRICS_HPP_
