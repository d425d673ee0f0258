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

#include "magnet/metrics.hpp"

#include "magnet/errors.hpp"

namespace magnet {

namespace {

void check_same_shape(const LabelMatrix& a, const LabelMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) {
    throw ShapeError("label matrices differ in shape: " + std::to_string(a.rows) + "x" +
                     std::to_string(a.cols) + " vs " + std::to_string(b.rows) + "x" +
                     std::to_string(b.cols));
  }
}

}  // namespace

void append_binarized(LabelMatrix& m, const Tensor& logits) {
  if (m.cols == 0 && m.rows == 0) m.cols = logits.size();
  if (logits.size() != m.cols) throw ShapeError("append_binarized: logit count mismatch");
  for (std::size_t j = 0; j < logits.size(); ++j) m.cells.push_back(logits[j] > 0.0 ? 1 : 0);
  ++m.rows;
}

ConfusionTotals confusion_totals(const LabelMatrix& targets, const LabelMatrix& predictions) {
  check_same_shape(targets, predictions);
  ConfusionTotals t;
  t.num_labels = targets.cols;
  t.num_examples = targets.rows;
  t.tp.assign(t.num_labels, 0);
  t.fp.assign(t.num_labels, 0);
  t.fn.assign(t.num_labels, 0);
  for (std::size_t i = 0; i < targets.rows; ++i) {
    for (std::size_t j = 0; j < targets.cols; ++j) {
      const bool y = targets(i, j) != 0;
      const bool z = predictions(i, j) != 0;
      if (y && z) ++t.tp[j];
      else if (!y && z) ++t.fp[j];
      else if (y && !z) ++t.fn[j];
    }
  }
  return t;
}

MicroScores micro_scores(const ConfusionTotals& totals, bool* degenerate) {
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (std::size_t j = 0; j < totals.tp.size(); ++j) {
    tp += totals.tp[j];
    fp += totals.fp[j];
    fn += totals.fn[j];
  }
  MicroScores s;
  const std::uint64_t denom = 2 * tp + fp + fn;
  if (degenerate != nullptr) *degenerate = denom == 0;
  if (denom == 0) return s;
  s.f1 = static_cast<double>(2 * tp) / static_cast<double>(denom);
  if (tp + fp > 0) s.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) s.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return s;
}

double micro_f1(const ConfusionTotals& totals) { return micro_scores(totals).f1; }

double hamming_loss(const LabelMatrix& targets, const LabelMatrix& predictions) {
  check_same_shape(targets, predictions);
  if (targets.cells.empty()) throw ShapeError("hamming_loss: empty label matrices");
  std::uint64_t wrong = 0;
  for (std::size_t i = 0; i < targets.cells.size(); ++i) {
    wrong += (targets.cells[i] != 0) != (predictions.cells[i] != 0) ? 1 : 0;
  }
  return static_cast<double>(wrong) / static_cast<double>(targets.cells.size());
}

}  // namespace magnet
