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

// Optimizer, gradient clipping, checkpoint files and the epoch loop.

#ifndef MAGNET_TRAINER_HPP_
#define MAGNET_TRAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "magnet/config.hpp"
#include "magnet/corpus.hpp"
#include "magnet/metrics.hpp"
#include "magnet/model.hpp"
#include "magnet/tensor.hpp"

namespace magnet {

/// Global L2 norm over the gradients of the trainable parameters.
double global_grad_norm(std::span<Parameter* const> params);

/// Rescales every trainable gradient by max_norm/g when the global norm g
/// exceeds max_norm. Returns g (before clipping). Throws NumericError if g is
/// not finite.
double clip_gradients(std::span<Parameter* const> params, double max_norm);

struct OptimizerState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t t = 0;
  std::vector<Tensor> m;  // one per parameter slot, shaped like the value
  std::vector<Tensor> v;
};

/// Adam with bias correction. Slots are positional: always pass the
/// parameters in the same order. Frozen parameters keep their slot but are
/// never updated.
class Adam {
 public:
  explicit Adam(double lr);

  void step(std::span<Parameter* const> params);
  const OptimizerState& state() const noexcept { return state_; }

 private:
  OptimizerState state_;
};

// Checkpoint file: "MAGNET1\n", u32 tensor count, then per tensor u32 name
// length, name bytes, u32 rank (always 2), rank x u64 dims and the float64
// payload. Every integer and double is little-endian.
inline constexpr char kCheckpointMagic[] = "MAGNET1\n";

struct NamedTensor {
  std::string name;
  Tensor value;
};

void save_checkpoint(const std::filesystem::path& path, std::span<const Parameter* const> params);
std::vector<NamedTensor> read_checkpoint(const std::filesystem::path& path);
/// Overwrites each parameter's value from the file. The file must hold
/// exactly these names with matching shapes.
void load_checkpoint(const std::filesystem::path& path, std::span<Parameter* const> params);

struct EvalResult {
  double loss = 0.0;  // mean per-document negated log-likelihood
  MicroScores scores;
  double hamming_loss = 0.0;
  std::size_t num_docs = 0;
  bool degenerate = false;  // no positives predicted or present
  LabelMatrix targets;
  LabelMatrix predictions;
};

/// Eval-mode pass: no dropout, predictions binarized at logit 0.
EvalResult evaluate(const MagnetModel& model, std::span<const Document> docs);

struct EpochRecord {
  std::size_t epoch = 0;
  std::string split;
  double loss = 0.0;
  double micro_f1 = 0.0;
  double hamming_loss = 0.0;
};

/// One JSON object, no trailing newline. Doubles use the shortest
/// round-trip form, so equal records give equal bytes.
std::string to_json_line(const EpochRecord& r);

struct TrainOptions {
  /// Written whenever eval micro-F1 improves. Empty disables writing.
  std::filesystem::path checkpoint_path;
  /// Called for every record as it is appended to the history.
  std::function<void(const EpochRecord&)> on_record;
  /// Leave the best-scoring parameters in the model when training ends.
  bool restore_best = true;
};

struct TrainRun {
  MagnetConfig config;
  std::uint64_t seed = 0;
  std::vector<EpochRecord> history;
  std::size_t epochs_run = 0;
  std::size_t steps = 0;
  std::size_t best_epoch = 0;
  double best_micro_f1 = -1.0;
  std::filesystem::path best_checkpoint;
  bool stopped_early = false;
};

/// Seeded mini-batch Adam over `train_docs`, evaluating both splits after each
/// epoch. A non-finite loss or gradient throws NumericError naming the step.
TrainRun train(MagnetModel& model, std::span<const Document> train_docs,
               std::span<const Document> eval_docs, const TrainOptions& options = {});

}  // namespace magnet

#endif  // MAGNET_TRAINER_HPP_
