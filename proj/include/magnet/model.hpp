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

// End-to-end model: sentence feature F from the encoder, label features
// H from the graph stack, logits H F and sigmoid cross-entropy.

#ifndef MAGNET_MODEL_HPP_
#define MAGNET_MODEL_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "magnet/autodiff.hpp"
#include "magnet/config.hpp"
#include "magnet/corpus.hpp"
#include "magnet/embeddings.hpp"
#include "magnet/encoder.hpp"
#include "magnet/labelgraph.hpp"
#include "magnet/rng.hpp"

namespace magnet {

/// ŷ = H_gat F (n x 1): per-label inner products with the sentence feature.
Var predict_logits(Graph& g, Var feature, Var label_features);

/// Negated log-likelihood summed over labels, in softplus form.
Var bce_loss(Graph& g, Var logits, Tensor targets);

/// n x 1 binary target column for a document.
Tensor label_vector(const Document& doc, std::size_t num_labels);

struct MagnetParams {
  Parameter token_embeddings;  // |V| x d_e
  Parameter label_embeddings;  // n x d_e
  Parameter adjacency;         // n x n
  EncoderParams encoder;
  std::vector<GraphLayerParams> layers;

  /// Every parameter in a fixed canonical order.
  std::vector<Parameter*> all();
  std::vector<const Parameter*> all() const;
  void zero_grad();
};

enum class Mode { kEval, kTrain };

class MagnetModel {
 public:
  /// Fresh parameters: token/label embeddings from the given tables, the
  /// adjacency from config.adjacency (stats needed for cooccurrence).
  static MagnetModel create(const MagnetConfig& config, Vocabulary vocab, LabelSpace labels,
                            const Tensor& token_vectors, const Tensor& label_matrix,
                            const CooccurrenceStats* stats);

  MagnetModel(MagnetConfig config, Vocabulary vocab, LabelSpace labels, MagnetParams params);

  const MagnetConfig& config() const noexcept { return config_; }
  const Vocabulary& vocab() const noexcept { return vocab_; }
  const LabelSpace& labels() const noexcept { return labels_; }
  MagnetParams& params() noexcept { return params_; }
  const MagnetParams& params() const noexcept { return params_; }
  std::size_t num_labels() const noexcept { return labels_.size(); }
  std::size_t feature_dim() const noexcept { return 2 * params_.encoder.hidden; }

  struct Bound {
    Var tokens;
    Var labels;
    Var adjacency;
    EncoderVars encoder;
    std::vector<LayerVars> layers;
  };

  /// Binds every parameter into `g`.
  Bound bind(Graph& g);
  /// Binds every parameter as an aliased constant, for inference.
  Bound bind_frozen(Graph& g) const;

  Var label_features(Graph& g, const Bound& b) const;

  /// Sentence feature for one document. Dropout is applied when `mode` is
  /// kTrain and p > 0; masks are drawn from `rng`.
  Var document_feature(Graph& g, const Bound& b, std::span<const std::size_t> token_ids, Mode mode,
                       Rng* rng) const;

  /// Mean over `docs` of the per-document loss, sharing one label-feature
  /// computation across the batch.
  Var batch_loss(Graph& g, const Bound& b, std::span<const Document* const> docs, Mode mode,
                 Rng* rng) const;

  /// Accumulates d(batch mean loss)/d(theta) into every trainable
  /// Parameter::grad and returns the batch mean loss. Same gradient as
  /// batch_loss, but each document gets its own short-lived graph so memory
  /// stays bounded by one document.
  double accumulate_batch_gradients(std::span<const Document* const> docs, Mode mode, Rng* rng);

  /// Eval-mode label features H_gat (n x 2h).
  Tensor label_feature_values() const;

  /// Eval-mode logits (n x 1) for one document given precomputed H_gat.
  Tensor logits(std::span<const std::size_t> token_ids, const Tensor& label_features) const;
  Tensor logits(std::span<const std::size_t> token_ids) const;

 private:
  MagnetConfig config_;
  Vocabulary vocab_;
  LabelSpace labels_;
  MagnetParams params_;
};

/// Draws an inverted-dropout mask: entries are 0 with probability p and
/// 1/(1-p) otherwise.
Tensor dropout_mask(std::size_t rows, std::size_t cols, double p, Rng& rng);

}  // namespace magnet

#endif  // MAGNET_MODEL_HPP_
