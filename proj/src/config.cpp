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

#include "magnet/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "magnet/errors.hpp"

namespace magnet {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::size_t parse_size(std::string_view key, std::string_view text) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("config key '" + std::string(key) + "': expected a non-negative integer, got '" +
                      std::string(text) + "'");
  }
  return v;
}

double parse_real(std::string_view key, std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("config key '" + std::string(key) + "': expected a number, got '" +
                      std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "off" || text == "no") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected true/false, got '" +
                    std::string(text) + "'");
}

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(AdjacencyInit v) {
  switch (v) {
    case AdjacencyInit::kIdentity: return "identity";
    case AdjacencyInit::kXavier: return "xavier";
    case AdjacencyInit::kCooccurrence: return "cooccurrence";
  }
  return "?";
}

std::string_view to_string(LayerMode v) { return v == LayerMode::kGat ? "gat" : "gcn"; }

std::string_view to_string(Pooling v) { return v == Pooling::kLastState ? "last" : "mean"; }

AdjacencyInit parse_adjacency_init(std::string_view text) {
  if (text == "identity") return AdjacencyInit::kIdentity;
  if (text == "xavier" || text == "random") return AdjacencyInit::kXavier;
  if (text == "cooccurrence") return AdjacencyInit::kCooccurrence;
  throw ConfigError("unknown adjacency init '" + std::string(text) +
                    "' (expected identity|xavier|cooccurrence)");
}

LayerMode parse_layer_mode(std::string_view text) {
  if (text == "gat") return LayerMode::kGat;
  if (text == "gcn") return LayerMode::kGcn;
  throw ConfigError("unknown layer mode '" + std::string(text) + "' (expected gat|gcn)");
}

Pooling parse_pooling(std::string_view text) {
  if (text == "last") return Pooling::kLastState;
  if (text == "mean") return Pooling::kMean;
  throw ConfigError("unknown pooling '" + std::string(text) + "' (expected last|mean)");
}

std::vector<std::string> MagnetConfig::keys() {
  return {"vocab_size", "embed_dim", "hidden", "graph_dims", "heads", "adjacency",
          "adjacency_trainable", "layer_mode", "softmax_attention", "pooling", "dropout",
          "embeddings_trainable", "max_tokens", "seed", "lr", "batch_size", "epochs",
          "patience", "clip_norm"};
}

void MagnetConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "vocab_size") vocab_size = parse_size(key, value);
  else if (key == "embed_dim") embed_dim = parse_size(key, value);
  else if (key == "hidden") hidden = parse_size(key, value);
  else if (key == "graph_dims") {
    graph_dims.clear();
    std::size_t pos = 0;
    while (pos <= value.size() && !value.empty()) {
      std::size_t comma = value.find(',', pos);
      if (comma == std::string_view::npos) comma = value.size();
      graph_dims.push_back(parse_size(key, trim(value.substr(pos, comma - pos))));
      pos = comma + 1;
    }
  }
  else if (key == "heads") heads = parse_size(key, value);
  else if (key == "adjacency") adjacency = parse_adjacency_init(value);
  else if (key == "adjacency_trainable") adjacency_trainable = parse_bool(key, value);
  else if (key == "layer_mode") layer_mode = parse_layer_mode(value);
  else if (key == "softmax_attention") softmax_attention = parse_bool(key, value);
  else if (key == "pooling") pooling = parse_pooling(value);
  else if (key == "dropout") dropout = parse_real(key, value);
  else if (key == "embeddings_trainable") embeddings_trainable = parse_bool(key, value);
  else if (key == "max_tokens") max_tokens = parse_size(key, value);
  else if (key == "seed") seed = parse_size(key, value);
  else if (key == "lr") lr = parse_real(key, value);
  else if (key == "batch_size") batch_size = parse_size(key, value);
  else if (key == "epochs") epochs = parse_size(key, value);
  else if (key == "patience") patience = parse_size(key, value);
  else if (key == "clip_norm") clip_norm = parse_real(key, value);
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::string MagnetConfig::get(std::string_view key) const {
  if (key == "vocab_size") return std::to_string(vocab_size);
  if (key == "embed_dim") return std::to_string(embed_dim);
  if (key == "hidden") return std::to_string(hidden);
  if (key == "graph_dims") {
    std::string out;
    for (std::size_t i = 0; i < graph_dims.size(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(graph_dims[i]);
    }
    return out;
  }
  if (key == "heads") return std::to_string(heads);
  if (key == "adjacency") return std::string(to_string(adjacency));
  if (key == "adjacency_trainable") return adjacency_trainable ? "true" : "false";
  if (key == "layer_mode") return std::string(to_string(layer_mode));
  if (key == "softmax_attention") return softmax_attention ? "true" : "false";
  if (key == "pooling") return std::string(to_string(pooling));
  if (key == "dropout") return format_real(dropout);
  if (key == "embeddings_trainable") return embeddings_trainable ? "true" : "false";
  if (key == "max_tokens") return std::to_string(max_tokens);
  if (key == "seed") return std::to_string(seed);
  if (key == "lr") return format_real(lr);
  if (key == "batch_size") return std::to_string(batch_size);
  if (key == "epochs") return std::to_string(epochs);
  if (key == "patience") return std::to_string(patience);
  if (key == "clip_norm") return format_real(clip_norm);
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void MagnetConfig::validate() const {
  if (vocab_size < 2) throw ConfigError("vocab_size must be at least 2");
  if (embed_dim == 0) throw ConfigError("embed_dim must be positive");
  if (hidden == 0) throw ConfigError("hidden must be positive");
  if (heads == 0) throw ConfigError("heads must be at least 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  if (max_tokens == 0) throw ConfigError("max_tokens must be positive");
  if (!(lr >= 0.0)) throw ConfigError("lr must be non-negative");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(clip_norm > 0.0)) throw ConfigError("clip_norm must be positive");
}

std::vector<std::size_t> MagnetConfig::layer_widths(std::size_t input_dim) const {
  std::vector<std::size_t> widths{input_dim};
  for (std::size_t d : graph_dims) widths.push_back(d == 0 ? 2 * hidden : d);
  widths.push_back(2 * hidden);
  return widths;
}

std::string MagnetConfig::to_text() const {
  std::string out;
  for (const auto& key : keys()) out += key + "=" + get(key) + "\n";
  return out;
}

void parse_config_text(std::string_view text, MagnetConfig& config, std::string_view source) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) +
                        ": expected key=value");
    }
    try {
      config.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void load_config_file(const std::filesystem::path& path, MagnetConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  parse_config_text(buf.str(), config, path.string());
}

void write_config_file(const std::filesystem::path& path, const MagnetConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write config file '" + path.string() + "'");
  out << config.to_text();
}

}  // namespace magnet
