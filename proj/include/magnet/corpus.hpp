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

#ifndef MAGNET_CORPUS_HPP_
#define MAGNET_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace magnet {

/// One dataset record as read from disk.
struct RawDocument {
  std::string text;
  std::vector<std::string> labels;
};

/// Reads a line-delimited dataset: one JSON object per line with "text"
/// (string) and "labels" (non-empty array of strings). Blank lines skip.
std::vector<RawDocument> read_dataset(const std::filesystem::path& path);
std::vector<RawDocument> parse_dataset(std::string_view contents, std::string_view source = "<memory>");
void write_dataset(const std::filesystem::path& path, std::span<const RawDocument> docs);

/// Lowercases ASCII, splits on whitespace, and emits every ASCII punctuation
/// character as its own token.
std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
 public:
  static constexpr std::size_t kUnkIndex = 0;
  static constexpr std::string_view kUnkToken = "<unk>";

  Vocabulary();
  /// Rebuilds from an index-ordered token list whose first entry is kUnkToken.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  std::size_t index_of(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(std::size_t index) const { return tokens_.at(index); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

 private:
  void add(std::string token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Ranks tokens by descending count with lexicographic tie-break and keeps
/// the top max_size - 1 behind the unknown token.
Vocabulary build_vocab(std::span<const std::vector<std::string>> tokenized_docs, std::size_t max_size);

/// Maps tokens to indices (OOV to kUnkIndex), truncated to max_tokens.
std::vector<std::size_t> encode(std::span<const std::string> tokens, const Vocabulary& vocab,
                                std::size_t max_tokens = SIZE_MAX);
std::vector<std::size_t> encode(std::string_view text, const Vocabulary& vocab,
                                std::size_t max_tokens = SIZE_MAX);

class LabelSpace {
 public:
  LabelSpace() = default;
  /// Names are indexed in the given order; duplicates are rejected.
  explicit LabelSpace(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  std::optional<std::size_t> find(std::string_view name) const;
  const std::string& name(std::size_t index) const { return names_.at(index); }
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Lexicographically sorted label names seen in the training records.
LabelSpace build_label_space(std::span<const RawDocument> train);

struct Document {
  std::string text;
  std::vector<std::size_t> token_ids;
  std::vector<std::size_t> label_ids;  // sorted, unique
};

struct CooccurrenceStats {
  std::size_t n = 0;
  std::vector<std::uint64_t> counts;  // row-major n x n
  std::vector<std::uint64_t> freq;

  std::uint64_t count(std::size_t i, std::size_t j) const { return counts[i * n + j]; }
};

CooccurrenceStats build_cooccurrence(std::span<const Document> docs, const LabelSpace& labels);

enum class UnknownLabelPolicy { kDrop, kError };

/// Tokenizes and encodes records against a fixed vocabulary and label space.
/// Unknown labels are dropped (with a warning) or rejected per `policy`.
std::vector<Document> encode_documents(std::span<const RawDocument> raw, const Vocabulary& vocab,
                                       const LabelSpace& labels, std::size_t max_tokens,
                                       UnknownLabelPolicy policy,
                                       std::vector<std::string>* warnings = nullptr);

struct Corpus {
  Vocabulary vocab;
  LabelSpace labels;
  std::vector<Document> train;
  std::vector<Document> test;
  CooccurrenceStats stats;
  std::vector<std::string> warnings;
};

/// Builds vocabulary and label space from `train`, encodes both splits and
/// computes label co-occurrence over the training split.
Corpus build_corpus(std::span<const RawDocument> train, std::span<const RawDocument> test,
                    std::size_t vocab_max_size, std::size_t max_tokens);

}  // namespace magnet

#endif  // MAGNET_CORPUS_HPP_
