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


#include <algorithm>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "magnet/errors.hpp"
#include "magnet/magnet.h"
#include "magnet/pipeline.hpp"

struct magnet_config {
  magnet::MagnetConfig value;
};

struct magnet_model {
  explicit magnet_model(magnet::MagnetModel m) : value(std::move(m)) {}
  magnet::MagnetModel value;
};

namespace {

thread_local std::string g_last_error;
thread_local std::vector<std::string> g_warnings;

magnet_status fail(magnet_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

magnet_status status_of(magnet::ErrorCode code) {
  return static_cast<magnet_status>(static_cast<int>(code));
}

// Runs `body` with exceptions translated into status codes.
template <typename F>
magnet_status guarded(F&& body) {
  g_last_error.clear();
  g_warnings.clear();
  try {
    body();
    return MAGNET_OK;
  } catch (const magnet::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MAGNET_ERR_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(MAGNET_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(MAGNET_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MAGNET_ERR_INTERNAL, "unknown exception");
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw magnet::InvalidArgumentError(std::string(what) + " must not be NULL");
}

std::filesystem::path optional_path(const char* p) {
  return p == nullptr ? std::filesystem::path() : std::filesystem::path(p);
}

}  // namespace

extern "C" {

const char* magnet_version(void) { return "1.0.0"; }

const char* magnet_status_name(magnet_status status) {
  switch (status) {
    case MAGNET_OK: return "ok";
    case MAGNET_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MAGNET_ERR_IO: return "i/o error";
    case MAGNET_ERR_PARSE: return "parse error";
    case MAGNET_ERR_CONFIG: return "config error";
    case MAGNET_ERR_SHAPE: return "shape error";
    case MAGNET_ERR_NUMERIC: return "numeric error";
    case MAGNET_ERR_LABEL_MISMATCH: return "label mismatch";
    case MAGNET_ERR_CHECKPOINT: return "checkpoint error";
    case MAGNET_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* magnet_last_error(void) { return g_last_error.c_str(); }

size_t magnet_warning_count(void) { return g_warnings.size(); }

const char* magnet_warning(size_t index) {
  return index < g_warnings.size() ? g_warnings[index].c_str() : nullptr;
}

magnet_status magnet_config_create(magnet_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new magnet_config();
  });
}

void magnet_config_destroy(magnet_config* config) { delete config; }

magnet_status magnet_config_load(magnet_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    magnet::MagnetConfig next = config->value;
    magnet::load_config_file(path, next);
    config->value = std::move(next);
  });
}

magnet_status magnet_config_set(magnet_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    config->value.set(key, value);
  });
}

magnet_status magnet_config_get(const magnet_config* config, const char* key, char* buf,
                                size_t capacity, size_t* needed) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    const std::string v = config->value.get(key);
    if (needed != nullptr) *needed = v.size() + 1;
    if (buf == nullptr || capacity < v.size() + 1) {
      throw magnet::InvalidArgumentError("buffer too small for value of '" + std::string(key) + "'");
    }
    std::memcpy(buf, v.c_str(), v.size() + 1);
  });
}

magnet_status magnet_train(const magnet_config* config, const char* train_path,
                           const char* test_path, const char* embeddings_path,
                           const char* out_dir, magnet_model** out_model,
                           magnet_train_summary* summary) {
  return guarded([&] {
    require(config, "config");
    require(train_path, "train_path");
    require(test_path, "test_path");
    require(out_dir, "out_dir");
    auto outcome = magnet::train_from_files(config->value, train_path, test_path,
                                            optional_path(embeddings_path), out_dir);
    g_warnings = outcome.warnings;
    if (summary != nullptr) {
      summary->epochs_run = outcome.run.epochs_run;
      summary->steps = outcome.run.steps;
      summary->best_epoch = outcome.run.best_epoch;
      summary->best_micro_f1 = outcome.run.best_micro_f1;
      summary->stopped_early = outcome.run.stopped_early ? 1 : 0;
    }
    if (out_model != nullptr) *out_model = new magnet_model(std::move(outcome.model));
  });
}

magnet_status magnet_model_load(const char* checkpoint_path, magnet_model** out) {
  return guarded([&] {
    require(checkpoint_path, "checkpoint_path");
    require(out, "out");
    *out = new magnet_model(magnet::load_model(checkpoint_path));
  });
}

void magnet_model_destroy(magnet_model* model) { delete model; }

magnet_status magnet_model_save(const magnet_model* model, const char* checkpoint_path) {
  return guarded([&] {
    require(model, "model");
    require(checkpoint_path, "checkpoint_path");
    magnet::save_model(model->value, checkpoint_path);
  });
}

size_t magnet_model_num_labels(const magnet_model* model) {
  return model == nullptr ? 0 : model->value.num_labels();
}

const char* magnet_model_label_name(const magnet_model* model, size_t index) {
  if (model == nullptr || index >= model->value.num_labels()) return nullptr;
  return model->value.labels().name(index).c_str();
}

magnet_status magnet_model_evaluate(const magnet_model* model, const char* dataset_path,
                                    magnet_metrics* out) {
  return guarded([&] {
    require(model, "model");
    require(dataset_path, "dataset_path");
    require(out, "out");
    const auto r = magnet::evaluate_file(model->value, dataset_path);
    if (r.degenerate) g_warnings.push_back("micro-F1 denominator is zero; reported as 0");
    out->loss = r.loss;
    out->micro_f1 = r.scores.f1;
    out->micro_precision = r.scores.precision;
    out->micro_recall = r.scores.recall;
    out->hamming_loss = r.hamming_loss;
    out->num_docs = r.num_docs;
    out->num_labels = model->value.num_labels();
  });
}

magnet_status magnet_model_predict(const magnet_model* model, const char* text, double* logits,
                                   size_t capacity, size_t* num_labels) {
  return guarded([&] {
    require(model, "model");
    require(text, "text");
    const size_t n = model->value.num_labels();
    if (num_labels != nullptr) *num_labels = n;
    if (logits == nullptr || capacity < n) {
      throw magnet::InvalidArgumentError("logit buffer holds " + std::to_string(capacity) +
                                         " values, model has " + std::to_string(n) + " labels");
    }
    const magnet::Tensor z = magnet::predict_text(model->value, text);
    std::copy(z.data().begin(), z.data().end(), logits);
  });
}

magnet_status magnet_model_adjacency(const magnet_model* model, double* out, size_t capacity,
                                     size_t* n) {
  return guarded([&] {
    require(model, "model");
    const magnet::Tensor& a = model->value.params().adjacency.value;
    if (n != nullptr) *n = a.rows();
    if (out == nullptr || capacity < a.size()) {
      throw magnet::InvalidArgumentError("adjacency buffer too small: need " +
                                         std::to_string(a.size()) + " values");
    }
    std::copy(a.data().begin(), a.data().end(), out);
  });
}

magnet_status magnet_model_write_adjacency(const magnet_model* model, const char* out_dir,
                                           size_t top_k) {
  return guarded([&] {
    require(model, "model");
    require(out_dir, "out_dir");
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    const magnet::Tensor& a = model->value.params().adjacency.value;
    const auto pairs = magnet::top_adjacency_pairs(a, top_k);
    for (const auto& [name, text] :
         {std::pair{"adjacency.tsv", magnet::adjacency_tsv(a, model->value.labels())},
          std::pair{"adjacency_pairs.tsv",
                    magnet::adjacency_pairs_tsv(pairs, model->value.labels())}}) {
      std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
      f << text;
      if (!f) throw magnet::IoError("failed writing " + (dir / name).string());
    }
  });
}

magnet_status magnet_ablate(const magnet_config* config, const char* kind, const char* train_path,
                            const char* test_path, const char* embeddings_path,
                            const char* out_dir) {
  return guarded([&] {
    require(config, "config");
    require(kind, "kind");
    require(train_path, "train_path");
    require(test_path, "test_path");
    require(out_dir, "out_dir");
    const auto k = magnet::parse_ablation_kind(kind);
    const auto train = magnet::read_dataset(train_path);
    const auto test = magnet::read_dataset(test_path);
    magnet::run_ablation(k, config->value, train, test, optional_path(embeddings_path), out_dir);
  });
}

}  // extern "C"
