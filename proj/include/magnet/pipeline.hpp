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


// File-level workflows shared by the C API and the tools: training into an
// output directory, loading a saved model, evaluation, prediction, adjacency
// inspection and the two ablation sweeps.

#ifndef MAGNET_PIPELINE_HPP_
#define MAGNET_PIPELINE_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "magnet/config.hpp"
#include "magnet/corpus.hpp"
#include "magnet/embeddings.hpp"
#include "magnet/model.hpp"
#include "magnet/trainer.hpp"

namespace magnet {

// Names of the files a training run leaves in its output directory. The
// checkpoint holds tensors only; the vocabulary, label names and resolved
// config sit next to it.
inline constexpr char kCheckpointFile[] = "model.ckpt";
inline constexpr char kConfigFile[] = "config.txt";
inline constexpr char kVocabFile[] = "vocab.txt";
inline constexpr char kLabelsFile[] = "labels.txt";
inline constexpr char kMetricsFile[] = "metrics.jsonl";

struct PreparedData {
  MagnetConfig config;  // embed_dim resolved from the embedding table
  Corpus corpus;
  EmbeddingTable embeddings;
  Tensor label_matrix;
};

/// Builds vocabulary, label space and co-occurrence from `train`, encodes
/// both splits and loads (or randomizes, when `embeddings_path` is empty) the
/// embedding table.
PreparedData prepare_data(MagnetConfig config, std::span<const RawDocument> train,
                          std::span<const RawDocument> test,
                          const std::filesystem::path& embeddings_path);

MagnetModel build_model(const PreparedData& data);

struct TrainOutcome {
  MagnetModel model;
  TrainRun run;
  std::vector<std::string> warnings;
};

/// Trains and writes checkpoint, sidecars, config snapshot and metrics log
/// into `out_dir`. The returned model holds the best-scoring parameters.
TrainOutcome train_to_directory(const MagnetConfig& config, std::span<const RawDocument> train,
                                std::span<const RawDocument> test,
                                const std::filesystem::path& embeddings_path,
                                const std::filesystem::path& out_dir);

TrainOutcome train_from_files(const MagnetConfig& config, const std::filesystem::path& train_path,
                              const std::filesystem::path& test_path,
                              const std::filesystem::path& embeddings_path,
                              const std::filesystem::path& out_dir);

/// Writes sidecars (config, vocab, labels) into `dir` alongside the
/// checkpoint file.
void write_sidecars(const MagnetModel& model, const std::filesystem::path& dir);
void save_model(const MagnetModel& model, const std::filesystem::path& checkpoint_path);
/// Loads a checkpoint plus the sidecars in its directory.
MagnetModel load_model(const std::filesystem::path& checkpoint_path);

/// Encodes `raw` against the model's vocabulary. A label the model does not
/// know raises LabelMismatchError.
std::vector<Document> encode_for_model(const MagnetModel& model,
                                       std::span<const RawDocument> raw);

EvalResult evaluate_file(const MagnetModel& model, const std::filesystem::path& dataset);

/// n x 1 logits for free text.
Tensor predict_text(const MagnetModel& model, std::string_view text);

struct AdjacencyPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 0.0;  // (A[i][j] + A[j][i]) / 2
};

/// Off-diagonal pairs i < j ordered by |(A + A^T)/2| descending, ties by
/// index. At most k pairs.
std::vector<AdjacencyPair> top_adjacency_pairs(const Tensor& adjacency, std::size_t k);

/// Tab-separated matrix with a header row of label names and the label name
/// leading each row.
std::string adjacency_tsv(const Tensor& adjacency, const LabelSpace& labels);
std::string adjacency_pairs_tsv(std::span<const AdjacencyPair> pairs, const LabelSpace& labels);

enum class AblationKind { kAdjacencyInit, kGatVsGcn };

AblationKind parse_ablation_kind(std::string_view text);
std::string_view to_string(AblationKind kind);

struct AblationVariant {
  std::string name;
  MagnetConfig config;
};

/// adjacency-init: identity, xavier, cooccurrence. gat-vs-gcn: gat, gcn.
/// Every variant shares the base config apart from the swept field.
std::vector<AblationVariant> ablation_variants(AblationKind kind, const MagnetConfig& base);

struct AblationRow {
  std::string variant;
  std::string adjacency;
  std::string layer_mode;
  std::size_t epochs_run = 0;
  double final_train_loss = 0.0;
  double final_test_loss = 0.0;
  double final_test_micro_f1 = 0.0;
  double final_test_hamming_loss = 0.0;
  std::size_t best_epoch = 0;
  double best_test_micro_f1 = 0.0;
};

/// Trains each variant under `out_dir/<variant>/` and writes
/// `out_dir/ablation.tsv` plus one `out_dir/series_<variant>.tsv` per
/// variant with one row per epoch and split.
std::vector<AblationRow> run_ablation(AblationKind kind, const MagnetConfig& base,
                                      std::span<const RawDocument> train,
                                      std::span<const RawDocument> test,
                                      const std::filesystem::path& embeddings_path,
                                      const std::filesystem::path& out_dir);

std::string ablation_table_tsv(std::span<const AblationRow> rows);
std::string series_tsv(std::span<const EpochRecord> history);

}  // namespace magnet

#endif  // MAGNET_PIPELINE_HPP_
