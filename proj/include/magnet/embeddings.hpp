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

// Word-vector text files ("count dim" header, then "token v1 ... vdim" rows)
// and the token / label embedding matrices built from them.

#ifndef MAGNET_EMBEDDINGS_HPP_
#define MAGNET_EMBEDDINGS_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "magnet/corpus.hpp"
#include "magnet/tensor.hpp"

namespace magnet {

/// Half-width of the uniform range used for vectors absent from a file.
inline constexpr double kRandomEmbeddingRange = 0.05;

struct EmbeddingTable {
  std::size_t dim = 0;
  Tensor vectors;  // |V| x dim, aligned to vocabulary indices
  bool trainable = true;
  std::size_t found = 0;  // vocabulary entries present in the file
  double coverage = 0.0;
  /// File vectors for requested non-vocabulary tokens (label names/words).
  std::unordered_map<std::string, std::vector<double>> extras;
  std::vector<std::string> warnings;
};

/// Seeded uniform(-0.05, 0.05) vector; a pure function of (token, seed).
std::vector<double> random_embedding(std::string_view token, std::size_t dim, std::uint64_t seed);

/// Table of random rows only, for runs without a pretrained file.
EmbeddingTable random_embedding_table(const Vocabulary& vocab, std::size_t dim, std::uint64_t seed);

/// Parses an embedding file and aligns it to `vocab`. Vectors for tokens in
/// `extra_tokens` that are not vocabulary entries are kept in `extras`.
EmbeddingTable load_embedding_file(const std::filesystem::path& path, const Vocabulary& vocab,
                                   std::uint64_t seed,
                                   std::span<const std::string> extra_tokens = {});
EmbeddingTable parse_embeddings(std::string_view contents, const Vocabulary& vocab,
                                std::uint64_t seed, std::span<const std::string> extra_tokens = {},
                                std::string_view source = "<memory>");

void write_embedding_file(const std::filesystem::path& path, std::span<const std::string> tokens,
                          const Tensor& vectors);

/// Lookup keys a label name may appear under in an embedding file: the
/// whole name with spaces as underscores, then its individual words.
std::vector<std::string> label_lookup_tokens(const LabelSpace& labels);

/// Words of a label name: split on whitespace and '_', ASCII-lowercased.
std::vector<std::string> label_words(std::string_view name);

/// n x dim matrix: row i is the file vector for label i's whole name if
/// present, else the unweighted mean of its word vectors. Words missing from
/// both the table and the extras get random_embedding(word, dim, seed).
Tensor build_label_matrix(const LabelSpace& labels, const EmbeddingTable& table,
                          const Vocabulary& vocab, std::uint64_t seed);

}  // namespace magnet

#endif  // MAGNET_EMBEDDINGS_HPP_
