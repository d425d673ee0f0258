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

#include "magnet/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "magnet/errors.hpp"

namespace magnet {

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_punct(unsigned char c) {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) ||
         (c >= 123 && c <= 126);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::vector<RawDocument> parse_dataset(std::string_view contents, std::string_view source) {
  std::vector<RawDocument> docs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = contents.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](char c) { return is_space(static_cast<unsigned char>(c)); })) {
      continue;
    }
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(where + ": invalid JSON record (" + e.what() + ")");
    }
    if (!record.is_object() || !record.contains("text") || !record["text"].is_string()) {
      throw ParseError(where + ": record needs a string field \"text\"");
    }
    if (!record.contains("labels") || !record["labels"].is_array() || record["labels"].empty()) {
      throw ParseError(where + ": record needs a non-empty array field \"labels\"");
    }
    RawDocument doc;
    doc.text = record["text"].get<std::string>();
    for (const auto& label : record["labels"]) {
      if (!label.is_string()) throw ParseError(where + ": labels must be strings");
      doc.labels.push_back(label.get<std::string>());
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<RawDocument> read_dataset(const std::filesystem::path& path) {
  return parse_dataset(read_file(path), path.string());
}

void write_dataset(const std::filesystem::path& path, std::span<const RawDocument> docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write dataset file '" + path.string() + "'");
  for (const auto& doc : docs) {
    nlohmann::json record = {{"text", doc.text}, {"labels", doc.labels}};
    out << record.dump() << '\n';
  }
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_space(c)) {
      flush();
    } else if (is_punct(c)) {
      flush();
      tokens.emplace_back(1, ch);
    } else if (c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      current.push_back(ch);
    }
  }
  flush();
  return tokens;
}

Vocabulary::Vocabulary() { add(std::string(kUnkToken)); }

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.empty() || tokens.front() != kUnkToken) {
    throw ParseError("vocabulary must start with the unknown token " + std::string(kUnkToken));
  }
  Vocabulary v;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (v.contains(tokens[i])) throw ParseError("duplicate vocabulary token '" + tokens[i] + "'");
    v.add(std::move(tokens[i]));
  }
  return v;
}

void Vocabulary::add(std::string token) {
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
}

std::size_t Vocabulary::index_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkIndex : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.count(std::string(token)) != 0;
}

Vocabulary build_vocab(std::span<const std::vector<std::string>> tokenized_docs,
                       std::size_t max_size) {
  if (max_size < 2) throw ConfigError("vocabulary max size must be at least 2");
  if (tokenized_docs.empty()) throw InvalidArgumentError("cannot build a vocabulary from zero documents");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& doc : tokenized_docs) {
    for (const auto& tok : doc) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
  // counts is key-ordered, so a stable sort by count keeps lexicographic ties.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens{std::string(Vocabulary::kUnkToken)};
  for (auto& [tok, count] : ranked) {
    if (tokens.size() >= max_size) break;
    tokens.push_back(tok);
  }
  return Vocabulary::from_tokens(std::move(tokens));
}

std::vector<std::size_t> encode(std::span<const std::string> tokens, const Vocabulary& vocab,
                                std::size_t max_tokens) {
  if (tokens.empty()) throw InvalidArgumentError("cannot encode an empty token sequence");
  const std::size_t n = std::min(tokens.size(), max_tokens);
  std::vector<std::size_t> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(vocab.index_of(tokens[i]));
  return ids;
}

std::vector<std::size_t> encode(std::string_view text, const Vocabulary& vocab,
                                std::size_t max_tokens) {
  const auto tokens = tokenize(text);
  return encode(std::span<const std::string>(tokens), vocab, max_tokens);
}

LabelSpace::LabelSpace(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) {
      throw InvalidArgumentError("duplicate label name '" + names_[i] + "'");
    }
  }
}

std::optional<std::size_t> LabelSpace::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LabelSpace build_label_space(std::span<const RawDocument> train) {
  std::set<std::string> names;
  for (const auto& doc : train) names.insert(doc.labels.begin(), doc.labels.end());
  if (names.size() < 2) {
    throw InvalidArgumentError("training data must contain at least 2 distinct labels, found " +
                               std::to_string(names.size()));
  }
  return LabelSpace(std::vector<std::string>(names.begin(), names.end()));
}

CooccurrenceStats build_cooccurrence(std::span<const Document> docs, const LabelSpace& labels) {
  CooccurrenceStats stats;
  stats.n = labels.size();
  stats.counts.assign(stats.n * stats.n, 0);
  stats.freq.assign(stats.n, 0);
  for (const auto& doc : docs) {
    if (doc.label_ids.empty()) throw InvalidArgumentError("co-occurrence: document without labels");
    for (std::size_t a : doc.label_ids) {
      if (a >= stats.n) throw InvalidArgumentError("co-occurrence: label id out of range");
      ++stats.freq[a];
      for (std::size_t b : doc.label_ids) ++stats.counts[a * stats.n + b];
    }
  }
  for (std::size_t i = 0; i < stats.n; ++i) {
    if (stats.freq[i] == 0) {
      throw InvalidArgumentError("co-occurrence: label '" + labels.name(i) +
                                 "' never occurs in the training documents");
    }
  }
  return stats;
}

std::vector<Document> encode_documents(std::span<const RawDocument> raw, const Vocabulary& vocab,
                                       const LabelSpace& labels, std::size_t max_tokens,
                                       UnknownLabelPolicy policy,
                                       std::vector<std::string>* warnings) {
  std::vector<Document> docs;
  docs.reserve(raw.size());
  std::set<std::string> reported;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto tokens = tokenize(raw[i].text);
    if (tokens.empty()) {
      throw ParseError("document " + std::to_string(i + 1) + " has no tokens");
    }
    Document doc;
    doc.text = raw[i].text;
    doc.token_ids = encode(std::span<const std::string>(tokens), vocab, max_tokens);
    for (const auto& name : raw[i].labels) {
      if (auto id = labels.find(name)) {
        doc.label_ids.push_back(*id);
      } else if (policy == UnknownLabelPolicy::kError) {
        throw LabelMismatchError("label '" + name + "' (document " + std::to_string(i + 1) +
                                 ") is not in the model's label space of " +
                                 std::to_string(labels.size()) + " labels");
      } else if (warnings != nullptr && reported.insert(name).second) {
        warnings->push_back("dropping label '" + name + "' absent from the training split");
      }
    }
    std::sort(doc.label_ids.begin(), doc.label_ids.end());
    doc.label_ids.erase(std::unique(doc.label_ids.begin(), doc.label_ids.end()), doc.label_ids.end());
    docs.push_back(std::move(doc));
  }
  return docs;
}

Corpus build_corpus(std::span<const RawDocument> train, std::span<const RawDocument> test,
                    std::size_t vocab_max_size, std::size_t max_tokens) {
  if (train.empty()) throw InvalidArgumentError("training split is empty");
  Corpus corpus;
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(train.size());
  for (const auto& doc : train) {
    auto tokens = tokenize(doc.text);
    if (tokens.size() > max_tokens) tokens.resize(max_tokens);
    tokenized.push_back(std::move(tokens));
  }
  corpus.vocab = build_vocab(tokenized, vocab_max_size);
  corpus.labels = build_label_space(train);
  corpus.train = encode_documents(train, corpus.vocab, corpus.labels, max_tokens,
                                  UnknownLabelPolicy::kError, &corpus.warnings);
  corpus.test = encode_documents(test, corpus.vocab, corpus.labels, max_tokens,
                                 UnknownLabelPolicy::kDrop, &corpus.warnings);
  corpus.stats = build_cooccurrence(corpus.train, corpus.labels);
  return corpus;
}

}  // namespace magnet
