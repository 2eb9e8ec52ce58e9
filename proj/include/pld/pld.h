/* Copyright 2026 The PLD Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

/* C interface to the pixel-level distinction highlight detector.
 *
 * Objects are opaque handles released with their matching *_free function.
 * Every fallible call returns a pld_status; on failure a one-line message is
 * available from pld_last_error() until the next call on the same thread.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with pld_string_free().
 */
#ifndef PLD_PLD_H_
#define PLD_PLD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PLD_BUILDING_LIBRARY)
#define PLD_API __attribute__((visibility("default")))
#else
#define PLD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pld_status {
  PLD_OK = 0,
  PLD_ERR_INVALID_ARGUMENT = 1,
  PLD_ERR_SHAPE = 2,
  PLD_ERR_IO = 3,
  PLD_ERR_FORMAT = 4,
  PLD_ERR_CONFIG = 5,
  PLD_ERR_DATA = 6,
  PLD_ERR_NON_FINITE = 7,
  PLD_ERR_INTERNAL = 8
} pld_status;

typedef enum pld_label_mode {
  PLD_LABEL_BASIC = 0,
  PLD_LABEL_SALIENCY = 1
} pld_label_mode;

typedef enum pld_temporal_mode {
  PLD_TEMPORAL_SLIDING = 0,
  PLD_TEMPORAL_DUPLICATE = 1
} pld_temporal_mode;

typedef enum pld_metric { PLD_METRIC_MAP = 0, PLD_METRIC_AP5 = 1 } pld_metric;

typedef enum pld_scenario {
  PLD_SCENARIO_BASIC = 0,
  PLD_SCENARIO_DISTRACTOR = 1
} pld_scenario;

typedef struct pld_dataset pld_dataset;
typedef struct pld_net pld_net;
typedef struct pld_scores pld_scores;

PLD_API const char* pld_version(void);
PLD_API const char* pld_last_error(void);
/* Stable machine-readable category, e.g. "io" or "shape". */
PLD_API const char* pld_status_name(pld_status status);
PLD_API void pld_string_free(char* s);

/* ---- data ---------------------------------------------------------------*/

typedef struct pld_synth_options {
  int videos;
  int test_videos;
  int segments_per_video;
  int frames_per_segment;
  int height;
  int width;
  double highlight_fraction;
  uint64_t seed;
  float background_mean;
  float noise_sigma;
  int square_size;
  pld_scenario scenario;
} pld_synth_options;

PLD_API void pld_synth_options_init(pld_synth_options* options);
/* Writes <out_dir>/train/dataset.json and, when test_videos > 0,
 * <out_dir>/test/dataset.json, each with its PLDT frames and saliency. */
PLD_API pld_status pld_synth_write(const pld_synth_options* options,
                                   const char* out_dir);
PLD_API pld_status pld_synth_generate(const pld_synth_options* options,
                                      pld_dataset** train,
                                      pld_dataset** test);

PLD_API pld_status pld_dataset_load(const char* manifest_path,
                                    pld_dataset** out);
PLD_API pld_status pld_dataset_write(const pld_dataset* dataset,
                                     const char* dir);
PLD_API void pld_dataset_free(pld_dataset* dataset);
PLD_API size_t pld_dataset_video_count(const pld_dataset* dataset);
/* Borrowed pointer valid while the dataset lives; NULL if out of range. */
PLD_API const char* pld_dataset_video_id(const pld_dataset* dataset,
                                         size_t index);

/* ---- training -----------------------------------------------------------*/

typedef struct pld_train_options {
  int epochs;
  float lr;
  float momentum;
  int clip_length;
  float beta;
  int frames_per_segment_sampled;
  pld_label_mode label_mode;
  pld_temporal_mode temporal_mode;
  uint64_t seed;
  /* Optional model topology as JSON (NULL = default for the data). */
  const char* model_config_json;
  /* Optional checkpoint directory written after training (NULL = none). */
  const char* checkpoint_dir;
} pld_train_options;

PLD_API void pld_train_options_init(pld_train_options* options);
/* On success *net receives the trained model and *report_json (optional,
 * may be NULL) the training report. */
PLD_API pld_status pld_train(const pld_dataset* dataset,
                             const pld_train_options* options, pld_net** net,
                             char** report_json);

PLD_API pld_status pld_net_load(const char* checkpoint_dir, pld_net** out);
PLD_API pld_status pld_net_save(const pld_net* net, const char* checkpoint_dir);
PLD_API void pld_net_free(pld_net* net);
PLD_API size_t pld_net_parameter_count(const pld_net* net);
PLD_API pld_status pld_net_config_json(const pld_net* net, char** out_json);

/* ---- scoring ------------------------------------------------------------*/

PLD_API pld_status pld_score(const pld_net* net, const pld_dataset* dataset,
                             int stride, pld_scores** out);
PLD_API pld_status pld_scores_load(const char* path, pld_scores** out);
PLD_API pld_status pld_scores_write(const pld_scores* scores, const char* path);
PLD_API void pld_scores_free(pld_scores* scores);
PLD_API size_t pld_scores_count(const pld_scores* scores);
PLD_API pld_status pld_scores_get(const pld_scores* scores, size_t index,
                                  const char** video_id, int* segment_index,
                                  double* score);
/* JSON object {video_id: [segment indices of the top_k segments]}. */
PLD_API pld_status pld_scores_highlights_json(const pld_scores* scores,
                                              int top_k, char** out_json);

/* Distinction maps (PLDT + PGM) for every stride-th frame of one video. */
PLD_API pld_status pld_infer_video(const pld_net* net,
                                   const pld_dataset* dataset,
                                   const char* video_id, int stride,
                                   const char* out_dir, size_t* maps_written);

/* ---- evaluation ---------------------------------------------------------*/

PLD_API pld_status pld_average_precision(const int* ranked, size_t count,
                                         double* out);
PLD_API pld_status pld_ap_at_k(const int* ranked, size_t count, int k,
                               double* out);
/* Report JSON with per-video, per-domain and overall values. When
 * random_trials > 0 a seeded random-scorer baseline is included. */
PLD_API pld_status pld_eval(const pld_scores* scores,
                            const pld_dataset* dataset, pld_metric metric,
                            int random_trials, uint64_t seed,
                            char** report_json, double* overall);

/* ---- verification -------------------------------------------------------*/

/* Finite-difference check of the full model gradient. config_name is
 * "toy" (default model on 8x8 frames, < 500 parameters) or "linear"
 * (y = w * x). report_json (optional, free with pld_string_free) lists the
 * per-parameter errors and how many values needed a smaller step or were
 * skipped at relu kinks. */
PLD_API pld_status pld_gradcheck(const char* config_name, uint64_t seed,
                                 float epsilon, double* max_relative_error,
                                 char** report_json);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // PLD_PLD_H_
