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

#include "magnet/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "magnet/errors.hpp"
#include "magnet/rng.hpp"

namespace magnet {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::vector<double> random_embedding(std::string_view token, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed ^ fnv1a(token));
  std::vector<double> v(dim);
  for (double& x : v) x = rng.uniform(-kRandomEmbeddingRange, kRandomEmbeddingRange);
  return v;
}

EmbeddingTable random_embedding_table(const Vocabulary& vocab, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw ConfigError("embedding dimension must be positive");
  EmbeddingTable table;
  table.dim = dim;
  table.vectors = Tensor(vocab.size(), dim);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto row = random_embedding(vocab.token(i), dim, seed);
    std::copy(row.begin(), row.end(), table.vectors.row_span(i).begin());
  }
  return table;
}

EmbeddingTable parse_embeddings(std::string_view contents, const Vocabulary& vocab,
                                std::uint64_t seed, std::span<const std::string> extra_tokens,
                                std::string_view source) {
  const std::string src(source);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= contents.size()) return false;
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    line = contents.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  if (!next_line(line)) throw ParseError(src + ": empty embedding file");
  const auto header = split_fields(line);
  std::size_t declared = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_number(header[0], declared) || !parse_number(header[1], dim) ||
      dim == 0) {
    throw ParseError(src + ":1: malformed header, expected \"<count> <dim>\"");
  }

  const std::unordered_set<std::string> wanted(extra_tokens.begin(), extra_tokens.end());
  EmbeddingTable table = random_embedding_table(vocab, dim, seed);
  std::vector<bool> seen(vocab.size(), false);
  std::unordered_set<std::string> seen_extra;
  std::size_t rows = 0;
  while (next_line(line)) {
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    ++rows;
    if (fields.size() - 1 != dim) {
      throw ParseError(src + ":" + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                       " values, found " + std::to_string(fields.size() - 1));
    }
    std::vector<double> values(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_number(fields[k + 1], values[k]) || !std::isfinite(values[k])) {
        throw ParseError(src + ":" + std::to_string(line_no) + ": bad value '" +
                         std::string(fields[k + 1]) + "'");
      }
    }
    const std::string token(fields[0]);
    bool duplicate = false;
    if (vocab.contains(token)) {
      const std::size_t idx = vocab.index_of(token);
      duplicate = seen[idx];
      seen[idx] = true;
      std::copy(values.begin(), values.end(), table.vectors.row_span(idx).begin());
    }
    if (wanted.count(token) != 0) {
      duplicate = duplicate || !seen_extra.insert(token).second;
      table.extras[token] = values;
    }
    if (duplicate) {
      table.warnings.push_back(src + ":" + std::to_string(line_no) + ": duplicate token '" +
                               token + "', last occurrence wins");
    }
  }
  if (rows != declared) {
    table.warnings.push_back(src + ": header declares " + std::to_string(declared) +
                             " rows, file has " + std::to_string(rows));
  }
  for (bool s : seen) table.found += s ? 1 : 0;
  table.coverage = static_cast<double>(table.found) / static_cast<double>(vocab.size());
  return table;
}

EmbeddingTable load_embedding_file(const std::filesystem::path& path, const Vocabulary& vocab,
                                   std::uint64_t seed, std::span<const std::string> extra_tokens) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embedding file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_embeddings(buf.str(), vocab, seed, extra_tokens, path.string());
}

void write_embedding_file(const std::filesystem::path& path, std::span<const std::string> tokens,
                          const Tensor& vectors) {
  if (tokens.size() != vectors.rows()) {
    throw ShapeError("write_embedding_file: token count does not match vector rows");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write embedding file '" + path.string() + "'");
  out << tokens.size() << ' ' << vectors.cols() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out << tokens[i];
    for (double v : vectors.row_span(i)) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

std::vector<std::string> label_words(std::string_view name) {
  std::vector<std::string> words;
  std::string current;
  for (char ch : name) {
    if (ch == ' ' || ch == '\t' || ch == '_') {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch >= 'A' && ch <= 'Z' ? static_cast<char>(ch - 'A' + 'a') : ch);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

namespace {

std::string joined_label_token(std::string_view name) {
  std::string token(name);
  for (char& c : token) {
    if (c == ' ' || c == '\t') c = '_';
  }
  return token;
}

}  // namespace

std::vector<std::string> label_lookup_tokens(const LabelSpace& labels) {
  std::set<std::string> tokens;
  for (const auto& name : labels.names()) {
    tokens.insert(joined_label_token(name));
    for (auto& w : label_words(name)) tokens.insert(std::move(w));
  }
  return {tokens.begin(), tokens.end()};
}

Tensor build_label_matrix(const LabelSpace& labels, const EmbeddingTable& table,
                          const Vocabulary& vocab, std::uint64_t seed) {
  Tensor m(labels.size(), table.dim);
  auto lookup = [&](const std::string& token, std::vector<double>& out) {
    if (auto it = table.extras.find(token); it != table.extras.end()) {
      out = it->second;
      return true;
    }
    if (vocab.contains(token)) {
      const auto row = table.vectors.row_span(vocab.index_of(token));
      out.assign(row.begin(), row.end());
      return true;
    }
    return false;
  };

  std::vector<double> v;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto row = m.row_span(i);
    const std::string whole = joined_label_token(labels.name(i));
    if (table.extras.count(whole) != 0) {
      const auto& src = table.extras.at(whole);
      std::copy(src.begin(), src.end(), row.begin());
      continue;
    }
    auto words = label_words(labels.name(i));
    if (words.empty()) words.push_back(whole);
    for (const auto& w : words) {
      if (!lookup(w, v)) v = random_embedding(w, table.dim, seed);
      for (std::size_t k = 0; k < table.dim; ++k) row[k] += v[k];
    }
    for (double& x : row) x /= static_cast<double>(words.size());
  }
  return m;
}

}  // namespace magnet
