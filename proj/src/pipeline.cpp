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


#include "magnet/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "magnet/errors.hpp"

namespace magnet {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, res.ptr};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f << text;
  if (!f) throw IoError("failed writing: " + path.string());
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line)) lines.push_back(line);
  return lines;
}

std::string join_lines(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += s + "\n";
  return out;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
}

fs::path sidecar_dir(const fs::path& checkpoint_path) {
  fs::path dir = checkpoint_path.parent_path();
  return dir.empty() ? fs::path(".") : dir;
}

}  // namespace

PreparedData prepare_data(MagnetConfig config, std::span<const RawDocument> train,
                          std::span<const RawDocument> test, const fs::path& embeddings_path) {
  config.validate();
  PreparedData d;
  d.corpus = build_corpus(train, test, config.vocab_size, config.max_tokens);
  if (embeddings_path.empty()) {
    d.embeddings = random_embedding_table(d.corpus.vocab, config.embed_dim, config.seed);
  } else {
    const auto extra = label_lookup_tokens(d.corpus.labels);
    d.embeddings = load_embedding_file(embeddings_path, d.corpus.vocab, config.seed, extra);
    config.embed_dim = d.embeddings.dim;
  }
  d.label_matrix = build_label_matrix(d.corpus.labels, d.embeddings, d.corpus.vocab, config.seed);
  d.config = std::move(config);
  return d;
}

MagnetModel build_model(const PreparedData& d) {
  return MagnetModel::create(d.config, d.corpus.vocab, d.corpus.labels, d.embeddings.vectors,
                             d.label_matrix, &d.corpus.stats);
}

void write_sidecars(const MagnetModel& model, const fs::path& dir) {
  write_config_file(dir / kConfigFile, model.config());
  write_text(dir / kVocabFile, join_lines(model.vocab().tokens()));
  write_text(dir / kLabelsFile, join_lines(model.labels().names()));
}

void save_model(const MagnetModel& model, const fs::path& checkpoint_path) {
  const fs::path dir = sidecar_dir(checkpoint_path);
  ensure_directory(dir);
  write_sidecars(model, dir);
  save_checkpoint(checkpoint_path, model.params().all());
}

TrainOutcome train_to_directory(const MagnetConfig& config, std::span<const RawDocument> train,
                                std::span<const RawDocument> test, const fs::path& embeddings_path,
                                const fs::path& out_dir) {
  PreparedData data = prepare_data(config, train, test, embeddings_path);
  MagnetModel model = build_model(data);
  std::vector<std::string> warnings = data.corpus.warnings;
  warnings.insert(warnings.end(), data.embeddings.warnings.begin(), data.embeddings.warnings.end());

  ensure_directory(out_dir);
  write_sidecars(model, out_dir);
  const fs::path metrics_path = out_dir / kMetricsFile;
  std::ofstream metrics(metrics_path, std::ios::binary | std::ios::trunc);
  if (!metrics) throw IoError("cannot open for writing: " + metrics_path.string());

  TrainOptions options;
  options.checkpoint_path = out_dir / kCheckpointFile;
  options.on_record = [&](const EpochRecord& r) { metrics << to_json_line(r) << '\n' << std::flush; };
  TrainRun run = magnet::train(model, data.corpus.train, data.corpus.test, options);
  if (!metrics) throw IoError("failed writing: " + metrics_path.string());
  return TrainOutcome{std::move(model), std::move(run), std::move(warnings)};
}

TrainOutcome train_from_files(const MagnetConfig& config, const fs::path& train_path,
                              const fs::path& test_path, const fs::path& embeddings_path,
                              const fs::path& out_dir) {
  const auto train = read_dataset(train_path);
  const auto test = read_dataset(test_path);
  return train_to_directory(config, train, test, embeddings_path, out_dir);
}

MagnetModel load_model(const fs::path& checkpoint_path) {
  const fs::path dir = sidecar_dir(checkpoint_path);
  MagnetConfig config;
  load_config_file(dir / kConfigFile, config);
  auto vocab_lines = read_lines(dir / kVocabFile);
  if (vocab_lines.empty() || vocab_lines.front() != Vocabulary::kUnkToken) {
    throw CheckpointError((dir / kVocabFile).string() + ": first entry must be " +
                          std::string(Vocabulary::kUnkToken));
  }
  Vocabulary vocab = Vocabulary::from_tokens(std::move(vocab_lines));
  LabelSpace labels(read_lines(dir / kLabelsFile));

  const auto tensors = read_checkpoint(checkpoint_path);
  auto find = [&](const char* name) -> const Tensor& {
    for (const auto& nt : tensors) {
      if (nt.name == name) return nt.value;
    }
    throw CheckpointError(checkpoint_path.string() + ": missing tensor '" + name + "'");
  };
  const Tensor& tokens = find("embeddings.tokens");
  const Tensor& label_rows = find("embeddings.labels");
  if (tokens.cols() != config.embed_dim) {
    throw CheckpointError(checkpoint_path.string() + ": embedding width " +
                          std::to_string(tokens.cols()) + " disagrees with config embed_dim " +
                          std::to_string(config.embed_dim));
  }

  // Shape skeleton only; every value is overwritten from the file.
  MagnetConfig skeleton = config;
  skeleton.adjacency = AdjacencyInit::kIdentity;
  MagnetModel shell = MagnetModel::create(skeleton, vocab, labels, tokens, label_rows, nullptr);
  load_checkpoint(checkpoint_path, shell.params().all());
  return MagnetModel(std::move(config), std::move(vocab), std::move(labels),
                     std::move(shell.params()));
}

std::vector<Document> encode_for_model(const MagnetModel& model, std::span<const RawDocument> raw) {
  std::vector<std::string> unknown;
  for (const auto& doc : raw) {
    for (const auto& name : doc.labels) {
      if (!model.labels().find(name) &&
          std::find(unknown.begin(), unknown.end(), name) == unknown.end()) {
        unknown.push_back(name);
      }
    }
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto& u : unknown) list += (list.empty() ? "" : ", ") + u;
    throw LabelMismatchError("dataset has " + std::to_string(unknown.size()) +
                             " label(s) unknown to the model (which has " +
                             std::to_string(model.num_labels()) + "): " + list);
  }
  return encode_documents(raw, model.vocab(), model.labels(), model.config().max_tokens,
                          UnknownLabelPolicy::kError);
}

EvalResult evaluate_file(const MagnetModel& model, const fs::path& dataset) {
  const auto raw = read_dataset(dataset);
  const auto docs = encode_for_model(model, raw);
  return evaluate(model, docs);
}

Tensor predict_text(const MagnetModel& model, std::string_view text) {
  const auto ids = encode(text, model.vocab(), model.config().max_tokens);
  return model.logits(ids);
}

std::vector<AdjacencyPair> top_adjacency_pairs(const Tensor& a, std::size_t k) {
  if (a.rows() != a.cols()) throw ShapeError("adjacency must be square, got " + shape_string(a));
  std::vector<AdjacencyPair> pairs;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) pairs.push_back({i, j, 0.5 * (a(i, j) + a(j, i))});
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const AdjacencyPair& x, const AdjacencyPair& y) {
    return std::abs(x.weight) > std::abs(y.weight);
  });
  if (pairs.size() > k) pairs.resize(k);
  return pairs;
}

std::string adjacency_tsv(const Tensor& a, const LabelSpace& labels) {
  if (a.rows() != labels.size() || a.cols() != labels.size()) {
    throw ShapeError("adjacency " + shape_string(a) + " does not match " +
                     std::to_string(labels.size()) + " labels");
  }
  std::string out = "label";
  for (const auto& name : labels.names()) out += "\t" + name;
  out += "\n";
  for (std::size_t i = 0; i < a.rows(); ++i) {
    out += labels.name(i);
    for (std::size_t j = 0; j < a.cols(); ++j) out += "\t" + fmt(a(i, j));
    out += "\n";
  }
  return out;
}

std::string adjacency_pairs_tsv(std::span<const AdjacencyPair> pairs, const LabelSpace& labels) {
  std::string out = "label_a\tlabel_b\tsymmetrized_weight\n";
  for (const auto& p : pairs) {
    out += labels.name(p.i) + "\t" + labels.name(p.j) + "\t" + fmt(p.weight) + "\n";
  }
  return out;
}

AblationKind parse_ablation_kind(std::string_view text) {
  if (text == "adjacency-init") return AblationKind::kAdjacencyInit;
  if (text == "gat-vs-gcn") return AblationKind::kGatVsGcn;
  throw ConfigError("unknown ablation kind '" + std::string(text) +
                    "' (expected adjacency-init or gat-vs-gcn)");
}

std::string_view to_string(AblationKind kind) {
  return kind == AblationKind::kAdjacencyInit ? "adjacency-init" : "gat-vs-gcn";
}

std::vector<AblationVariant> ablation_variants(AblationKind kind, const MagnetConfig& base) {
  std::vector<AblationVariant> out;
  if (kind == AblationKind::kAdjacencyInit) {
    for (AdjacencyInit a : {AdjacencyInit::kIdentity, AdjacencyInit::kXavier,
                            AdjacencyInit::kCooccurrence}) {
      MagnetConfig c = base;
      c.adjacency = a;
      out.push_back({std::string(to_string(a)), c});
    }
  } else {
    for (LayerMode m : {LayerMode::kGat, LayerMode::kGcn}) {
      MagnetConfig c = base;
      c.layer_mode = m;
      out.push_back({std::string(to_string(m)), c});
    }
  }
  return out;
}

std::string series_tsv(std::span<const EpochRecord> history) {
  std::string out = "epoch\tsplit\tloss\tmicro_f1\thamming_loss\n";
  for (const auto& r : history) {
    out += std::to_string(r.epoch) + "\t" + r.split + "\t" + fmt(r.loss) + "\t" + fmt(r.micro_f1) +
           "\t" + fmt(r.hamming_loss) + "\n";
  }
  return out;
}

std::string ablation_table_tsv(std::span<const AblationRow> rows) {
  std::string out =
      "variant\tadjacency\tlayer_mode\tepochs\tfinal_train_loss\tfinal_test_loss\t"
      "final_test_micro_f1\tfinal_test_hamming_loss\tbest_epoch\tbest_test_micro_f1\n";
  for (const auto& r : rows) {
    out += r.variant + "\t" + r.adjacency + "\t" + r.layer_mode + "\t" +
           std::to_string(r.epochs_run) + "\t" + fmt(r.final_train_loss) + "\t" +
           fmt(r.final_test_loss) + "\t" + fmt(r.final_test_micro_f1) + "\t" +
           fmt(r.final_test_hamming_loss) + "\t" + std::to_string(r.best_epoch) + "\t" +
           fmt(r.best_test_micro_f1) + "\n";
  }
  return out;
}

std::vector<AblationRow> run_ablation(AblationKind kind, const MagnetConfig& base,
                                      std::span<const RawDocument> train,
                                      std::span<const RawDocument> test,
                                      const fs::path& embeddings_path, const fs::path& out_dir) {
  ensure_directory(out_dir);
  std::vector<AblationRow> rows;
  for (const auto& variant : ablation_variants(kind, base)) {
    TrainOutcome outcome =
        train_to_directory(variant.config, train, test, embeddings_path, out_dir / variant.name);
    const auto& h = outcome.run.history;
    AblationRow row;
    row.variant = variant.name;
    row.adjacency = std::string(to_string(variant.config.adjacency));
    row.layer_mode = std::string(to_string(variant.config.layer_mode));
    row.epochs_run = outcome.run.epochs_run;
    for (const auto& r : h) {
      if (r.epoch != row.epochs_run) continue;
      if (r.split == "train") {
        row.final_train_loss = r.loss;
      } else {
        row.final_test_loss = r.loss;
        row.final_test_micro_f1 = r.micro_f1;
        row.final_test_hamming_loss = r.hamming_loss;
      }
    }
    row.best_epoch = outcome.run.best_epoch;
    row.best_test_micro_f1 = outcome.run.best_micro_f1;
    write_text(out_dir / ("series_" + variant.name + ".tsv"), series_tsv(h));
    rows.push_back(std::move(row));
  }
  write_text(out_dir / "ablation.tsv", ablation_table_tsv(rows));
  return rows;
}

}  // namespace magnet
