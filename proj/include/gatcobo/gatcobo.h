/*
 * Copyright 2026 The gatcobo Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GATCOBO_GATCOBO_H_
#define GATCOBO_GATCOBO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GC_API __declspec(dllexport)
#else
#define GC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gc_graph gc_graph;
typedef struct gc_model gc_model;

typedef enum gc_status {
  GC_OK = 0,
  GC_ERR_INTERNAL = 1,
  GC_ERR_CONFIG = 2,
  GC_ERR_DATA = 3,
  GC_ERR_TRAINING = 4,
  GC_ERR_CONTRACT = 5,
  GC_ERR_DIMENSION = 6,
  GC_ERR_DOMAIN = 7,
  GC_ERR_ARGUMENT = 8
} gc_status;

typedef enum gc_split { GC_SPLIT_TRAIN = 1, GC_SPLIT_VAL = 2, GC_SPLIT_TEST = 3 } gc_split;

typedef void (*gc_warning_fn)(const char* message, void* user_data);

/* Message of the last failed call on this thread; empty after success. */
GC_API const char* gc_last_error(void);
GC_API const char* gc_status_name(gc_status status);
GC_API const char* gc_version(void);
/* Frees any char* returned through an out parameter. */
GC_API void gc_string_free(char* s);
/* NULL restores the default stderr sink. */
GC_API void gc_set_warning_callback(gc_warning_fn fn, void* user_data);

/* Run configuration. `name_or_path` is a preset name (default, sichuan,
 * bupt) or a JSON file. `dataset` (may be NULL) is "synthetic", a directory
 * with nodes.csv and edges.csv, or a name under $GATCOBO_DATA_DIR. The result
 * is a canonical JSON document accepted by every call taking config_json. */
GC_API gc_status gc_config_resolve(const char* name_or_path, const char* dataset, int has_seed,
                                   uint64_t seed, const char* output_dir, char** config_json);

/* Graphs. */
GC_API gc_status gc_graph_prepare(const char* config_json, gc_graph** out);
GC_API gc_status gc_graph_load(const char* nodes_path, const char* edges_path, int self_loops,
                               int standardize, gc_graph** out);
GC_API gc_status gc_graph_generate(const char* config_json, gc_graph** out);
GC_API gc_status gc_graph_save(const gc_graph* g, const char* nodes_path, const char* edges_path);
GC_API gc_status gc_graph_split(gc_graph* g, double train_fraction, double val_fraction,
                                double test_fraction, uint64_t seed);
GC_API gc_status gc_graph_subsample(const gc_graph* g, double target_ir, uint64_t seed,
                                    gc_graph** out);
GC_API gc_status gc_graph_info(const gc_graph* g, char** info_json);
GC_API size_t gc_graph_num_nodes(const gc_graph* g);
GC_API int gc_graph_num_classes(const gc_graph* g);
GC_API void gc_graph_free(gc_graph* g);

/* Training and inference. */
GC_API gc_status gc_train(const char* config_json, const gc_graph* g, gc_model** model,
                          char** report_json);
GC_API gc_status gc_model_save(const gc_model* m, const char* path);
GC_API gc_status gc_model_load(const char* path, gc_model** out);
GC_API gc_status gc_model_info(const gc_model* m, char** info_json);
GC_API void gc_model_free(gc_model* m);
/* labels: num_nodes ints; scores: num_nodes * K doubles (row-softmaxed
 * aggregate scores). Either may be NULL. */
GC_API gc_status gc_predict(const gc_model* m, const gc_graph* g, int* labels, double* scores);
GC_API gc_status gc_evaluate(const gc_model* m, const gc_graph* g, gc_split split,
                             char** report_json);
GC_API gc_status gc_verify_bound(const gc_model* m, const gc_graph* g, char** report_json);

/* Experiments. Tables come back as CSV text. */
GC_API gc_status gc_ir_sweep(const char* config_json, char** csv);
GC_API gc_status gc_depth_sweep(const char* config_json, char** csv);
GC_API gc_status gc_hp_sweep(const char* config_json, char** csv);
GC_API gc_status gc_time_epochs(const char* config_json, char** csv, double* median_ms);
GC_API gc_status gc_verify_bound_random(const char* config_json, size_t count, uint64_t seed,
                                        char** csv, size_t* violations);

/* Creates base/prefix-YYYYmmdd-HHMMSS[-n]; never reuses a directory. */
GC_API gc_status gc_make_run_dir(const char* base, const char* prefix, char** path);
GC_API gc_status gc_write_file(const char* path, const char* text);

#ifdef __cplusplus
}
#endif

#endif /* GATCOBO_GATCOBO_H_ */
