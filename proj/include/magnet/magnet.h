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


/* C interface to the classifier. Every object is an opaque handle; every call
 * that can fail returns a magnet_status and leaves a message retrievable with
 * magnet_last_error() on the calling thread. */

#ifndef MAGNET_MAGNET_H_
#define MAGNET_MAGNET_H_

#include <stddef.h>

#if defined(_WIN32)
#if defined(MAGNET_BUILDING_LIBRARY)
#define MAGNET_API __declspec(dllexport)
#else
#define MAGNET_API __declspec(dllimport)
#endif
#else
#define MAGNET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum magnet_status {
  MAGNET_OK = 0,
  MAGNET_ERR_INVALID_ARGUMENT = 1,
  MAGNET_ERR_IO = 2,
  MAGNET_ERR_PARSE = 3,
  MAGNET_ERR_CONFIG = 4,
  MAGNET_ERR_SHAPE = 5,
  MAGNET_ERR_NUMERIC = 6, /* includes training divergence */
  MAGNET_ERR_LABEL_MISMATCH = 7,
  MAGNET_ERR_CHECKPOINT = 8,
  MAGNET_ERR_INTERNAL = 9
} magnet_status;

typedef struct magnet_config magnet_config;
typedef struct magnet_model magnet_model;

typedef struct magnet_metrics {
  double loss;
  double micro_f1;
  double micro_precision;
  double micro_recall;
  double hamming_loss;
  size_t num_docs;
  size_t num_labels;
} magnet_metrics;

typedef struct magnet_train_summary {
  size_t epochs_run;
  size_t steps;
  size_t best_epoch;
  double best_micro_f1;
  int stopped_early;
} magnet_train_summary;

MAGNET_API const char* magnet_version(void);
MAGNET_API const char* magnet_status_name(magnet_status status);
/* Message of the last failed call on this thread; "" after a success. */
MAGNET_API const char* magnet_last_error(void);
/* Non-fatal notices (unknown labels dropped, embedding coverage, ...) from the
 * last call on this thread. */
MAGNET_API size_t magnet_warning_count(void);
MAGNET_API const char* magnet_warning(size_t index);

MAGNET_API magnet_status magnet_config_create(magnet_config** out);
MAGNET_API void magnet_config_destroy(magnet_config* config);
/* Applies a key=value file on top of the current values. */
MAGNET_API magnet_status magnet_config_load(magnet_config* config, const char* path);
MAGNET_API magnet_status magnet_config_set(magnet_config* config, const char* key,
                                           const char* value);
/* Copies the value (NUL-terminated) into buf. *needed receives the size
 * including the terminator; a short buffer gives MAGNET_ERR_INVALID_ARGUMENT. */
MAGNET_API magnet_status magnet_config_get(const magnet_config* config, const char* key,
                                           char* buf, size_t capacity, size_t* needed);

/* Trains into out_dir (checkpoint, sidecars, config snapshot, metrics log).
 * embeddings_path may be NULL for random embeddings; out_model and summary
 * may be NULL. */
MAGNET_API magnet_status magnet_train(const magnet_config* config, const char* train_path,
                                      const char* test_path, const char* embeddings_path,
                                      const char* out_dir, magnet_model** out_model,
                                      magnet_train_summary* summary);

MAGNET_API magnet_status magnet_model_load(const char* checkpoint_path, magnet_model** out);
MAGNET_API void magnet_model_destroy(magnet_model* model);
MAGNET_API magnet_status magnet_model_save(const magnet_model* model, const char* checkpoint_path);
MAGNET_API size_t magnet_model_num_labels(const magnet_model* model);
/* Owned by the model; NULL when index is out of range. */
MAGNET_API const char* magnet_model_label_name(const magnet_model* model, size_t index);

MAGNET_API magnet_status magnet_model_evaluate(const magnet_model* model, const char* dataset_path,
                                               magnet_metrics* out);
/* Writes one logit per label; label j is predicted when logits[j] > 0. */
MAGNET_API magnet_status magnet_model_predict(const magnet_model* model, const char* text,
                                              double* logits, size_t capacity,
                                              size_t* num_labels);
/* Row-major n x n copy of the learned adjacency. */
MAGNET_API magnet_status magnet_model_adjacency(const magnet_model* model, double* out,
                                                size_t capacity, size_t* n);
/* Writes adjacency.tsv and adjacency_pairs.tsv (top_k symmetrized pairs). */
MAGNET_API magnet_status magnet_model_write_adjacency(const magnet_model* model,
                                                      const char* out_dir, size_t top_k);

/* kind: "adjacency-init" or "gat-vs-gcn". Writes ablation.tsv, one
 * series_<variant>.tsv per variant and a run directory per variant. */
MAGNET_API magnet_status magnet_ablate(const magnet_config* config, const char* kind,
                                       const char* train_path, const char* test_path,
                                       const char* embeddings_path, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* MAGNET_MAGNET_H_ */
