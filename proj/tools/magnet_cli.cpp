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


// Command-line front end. Talks to the library only through magnet.h.
//
// Exit codes: 0 success, 1-9 the magnet_status of the failing call, 64 bad
// usage.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "magnet/magnet.h"

namespace {

constexpr int kUsageExit = 64;

struct ConfigDeleter {
  void operator()(magnet_config* c) const { magnet_config_destroy(c); }
};
struct ModelDeleter {
  void operator()(magnet_model* m) const { magnet_model_destroy(m); }
};
using ConfigPtr = std::unique_ptr<magnet_config, ConfigDeleter>;
using ModelPtr = std::unique_ptr<magnet_model, ModelDeleter>;

struct Failure {
  magnet_status status;
};

void check(magnet_status s) {
  if (s != MAGNET_OK) throw Failure{s};
}

void print_warnings() {
  for (size_t i = 0; i < magnet_warning_count(); ++i) {
    std::fprintf(stderr, "magnet: warning: %s\n", magnet_warning(i));
  }
}

// Shortest form that reads back to the same double.
std::string num(double x) {
  char buf[64];
  return {buf, std::to_chars(buf, buf + sizeof(buf), x).ptr};
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Flags shared by train and ablate. Empty strings mean "not given".
struct ConfigFlags {
  std::string config_path;
  std::string seed, adjacency, layer_mode, heads, hidden, epochs;
  std::vector<std::string> sets;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key=value config file");
    app->add_option("--seed", seed, "RNG seed");
    app->add_option("--adjacency", adjacency, "identity | xavier | cooccurrence");
    app->add_option("--layer-mode", layer_mode, "gat | gcn");
    app->add_option("--heads", heads, "attention heads per layer");
    app->add_option("--hidden", hidden, "LSTM hidden size per direction");
    app->add_option("--epochs", epochs, "maximum epochs");
    app->add_option("--set", sets, "extra key=value override (repeatable)");
  }

  ConfigPtr resolve() const {
    magnet_config* raw = nullptr;
    check(magnet_config_create(&raw));
    ConfigPtr cfg(raw);
    if (!config_path.empty()) check(magnet_config_load(cfg.get(), config_path.c_str()));
    const std::pair<const char*, const std::string*> flags[] = {
        {"seed", &seed},     {"adjacency", &adjacency}, {"layer_mode", &layer_mode},
        {"heads", &heads},   {"hidden", &hidden},       {"epochs", &epochs}};
    for (const auto& [key, value] : flags) {
      if (!value->empty()) check(magnet_config_set(cfg.get(), key, value->c_str()));
    }
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
      }
      check(magnet_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    return cfg;
  }
};

const char* or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

ModelPtr load(const std::string& checkpoint) {
  magnet_model* raw = nullptr;
  check(magnet_model_load(checkpoint.c_str(), &raw));
  return ModelPtr(raw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-label text classifier with a learnable label graph"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(magnet_version()));

  ConfigFlags train_flags;
  std::string train_path, test_path, embeddings_path, out_dir;
  auto* train_cmd = app.add_subcommand("train", "train a model into an output directory");
  train_flags.attach(train_cmd);
  train_cmd->add_option("--train", train_path, "training set (JSONL)")->required();
  train_cmd->add_option("--test", test_path, "evaluation set (JSONL)")->required();
  train_cmd->add_option("--embeddings", embeddings_path, "embedding text file");
  train_cmd->add_option("--out", out_dir, "output directory")->required();

  std::string checkpoint, eval_data, eval_out;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
  eval_cmd->add_option("--checkpoint", checkpoint, "model.ckpt path")->required();
  eval_cmd->add_option("--test", eval_data, "dataset (JSONL)")->required();
  eval_cmd->add_option("--out", eval_out, "directory for eval.json");

  std::string text;
  auto* predict_cmd = app.add_subcommand("predict", "score one text");
  predict_cmd->add_option("--checkpoint", checkpoint, "model.ckpt path")->required();
  predict_cmd->add_option("--text", text, "input text")->required();

  std::string inspect_out;
  std::size_t top_k = 10;
  auto* inspect_cmd = app.add_subcommand("inspect-adjacency", "dump the learned label adjacency");
  inspect_cmd->add_option("--checkpoint", checkpoint, "model.ckpt path")->required();
  inspect_cmd->add_option("--out", inspect_out, "output directory")->required();
  inspect_cmd->add_option("--top-k", top_k, "strongest symmetrized pairs to list");

  ConfigFlags ablate_flags;
  std::string kind;
  auto* ablate_cmd = app.add_subcommand("ablate", "run an ablation sweep");
  ablate_flags.attach(ablate_cmd);
  ablate_cmd->add_option("--kind", kind, "adjacency-init | gat-vs-gcn")->required();
  ablate_cmd->add_option("--train", train_path, "training set (JSONL)")->required();
  ablate_cmd->add_option("--test", test_path, "evaluation set (JSONL)")->required();
  ablate_cmd->add_option("--embeddings", embeddings_path, "embedding text file");
  ablate_cmd->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageExit;
  }

  try {
    if (*train_cmd) {
      ConfigPtr cfg = train_flags.resolve();
      magnet_train_summary summary{};
      check(magnet_train(cfg.get(), train_path.c_str(), test_path.c_str(), or_null(embeddings_path),
                         out_dir.c_str(), nullptr, &summary));
      print_warnings();
      std::printf("epochs %zu  steps %zu  best_epoch %zu  best_test_micro_f1 %.6f%s\n",
                  summary.epochs_run, summary.steps, summary.best_epoch, summary.best_micro_f1,
                  summary.stopped_early ? "  (early stop)" : "");
    } else if (*eval_cmd) {
      ModelPtr model = load(checkpoint);
      magnet_metrics m{};
      check(magnet_model_evaluate(model.get(), eval_data.c_str(), &m));
      print_warnings();
      const std::string line =
          "{\"docs\":" + std::to_string(m.num_docs) + ",\"labels\":" + std::to_string(m.num_labels) +
          ",\"loss\":" + num(m.loss) + ",\"micro_f1\":" + num(m.micro_f1) +
          ",\"micro_precision\":" + num(m.micro_precision) + ",\"micro_recall\":" +
          num(m.micro_recall) + ",\"hamming_loss\":" + num(m.hamming_loss) + "}";
      std::printf("micro_f1 %.6f  hamming_loss %.6f  (%zu docs)\n%s\n", m.micro_f1,
                  m.hamming_loss, m.num_docs, line.c_str());
      if (!eval_out.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(eval_out, ec);
        std::ofstream f(std::filesystem::path(eval_out) / "eval.json", std::ios::trunc);
        f << line << '\n';
        if (!f) {
          std::fprintf(stderr, "magnet: error: cannot write %s/eval.json\n", eval_out.c_str());
          return MAGNET_ERR_IO;
        }
      }
    } else if (*predict_cmd) {
      ModelPtr model = load(checkpoint);
      const size_t n = magnet_model_num_labels(model.get());
      std::vector<double> logits(n);
      size_t got = 0;
      check(magnet_model_predict(model.get(), text.c_str(), logits.data(), n, &got));
      std::printf("label\tlogit\tpredicted\n");
      for (size_t j = 0; j < got; ++j) {
        std::printf("%s\t%.6f\t%d\n", magnet_model_label_name(model.get(), j), logits[j],
                    logits[j] > 0.0 ? 1 : 0);
      }
    } else if (*inspect_cmd) {
      ModelPtr model = load(checkpoint);
      check(magnet_model_write_adjacency(model.get(), inspect_out.c_str(), top_k));
      std::fputs(read_file(inspect_out + "/adjacency_pairs.tsv").c_str(), stdout);
    } else if (*ablate_cmd) {
      ConfigPtr cfg = ablate_flags.resolve();
      check(magnet_ablate(cfg.get(), kind.c_str(), train_path.c_str(), test_path.c_str(),
                          or_null(embeddings_path), out_dir.c_str()));
      std::fputs(read_file(out_dir + "/ablation.tsv").c_str(), stdout);
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "magnet: error: %s\n", magnet_last_error());
    return static_cast<int>(f.status);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "magnet: error: %s\n", e.what());
    return kUsageExit;
  }
  return 0;
}
