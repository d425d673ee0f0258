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

#ifndef MAGNET_CONFIG_HPP_
#define MAGNET_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace magnet {

enum class AdjacencyInit { kIdentity, kXavier, kCooccurrence };
enum class LayerMode { kGat, kGcn };
enum class Pooling { kLastState, kMean };

std::string_view to_string(AdjacencyInit v);
std::string_view to_string(LayerMode v);
std::string_view to_string(Pooling v);
AdjacencyInit parse_adjacency_init(std::string_view text);
LayerMode parse_layer_mode(std::string_view text);
Pooling parse_pooling(std::string_view text);

/// Model and training hyper-parameters. The defaults are sized for a
/// news-wire corpus: vocab 20k, 768-d embeddings, hidden 250, 4 heads, Adam
/// at 1e-3, batch 250, dropout 0.5, clip norm 10.
struct MagnetConfig {
  // model
  std::size_t vocab_size = 20000;
  std::size_t embed_dim = 768;  // overridden by the embedding file header
  std::size_t hidden = 250;
  /// Output widths of the graph layers before the last; 0 means 2*hidden.
  /// The last layer always emits 2*hidden. Default: two layers.
  std::vector<std::size_t> graph_dims{0};
  std::size_t heads = 4;
  AdjacencyInit adjacency = AdjacencyInit::kXavier;
  bool adjacency_trainable = true;
  LayerMode layer_mode = LayerMode::kGat;
  bool softmax_attention = true;
  Pooling pooling = Pooling::kLastState;
  double dropout = 0.5;
  bool embeddings_trainable = true;
  std::size_t max_tokens = 400;
  std::uint64_t seed = 1;

  // training
  double lr = 1e-3;
  std::size_t batch_size = 250;
  std::size_t epochs = 50;
  std::size_t patience = 10;  // 0 disables early stopping
  double clip_norm = 10.0;

  /// Sets one key from its text form; throws ConfigError on unknown keys or
  /// malformed values.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  /// Throws ConfigError if any invariant is violated.
  void validate() const;

  /// Widths d_0 -> d_1 -> ... -> 2*hidden of the graph stack for input width
  /// `input_dim`.
  std::vector<std::size_t> layer_widths(std::size_t input_dim) const;

  /// key=value lines in a fixed key order.
  std::string to_text() const;

  static std::vector<std::string> keys();
};

/// Applies a flat key=value file ('#' starts a comment) on top of `config`.
void load_config_file(const std::filesystem::path& path, MagnetConfig& config);
void parse_config_text(std::string_view text, MagnetConfig& config, std::string_view source = "<memory>");
void write_config_file(const std::filesystem::path& path, const MagnetConfig& config);

}  // namespace magnet

#endif  // MAGNET_CONFIG_HPP_
