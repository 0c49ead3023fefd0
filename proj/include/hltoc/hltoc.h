// Copyright 2026 The hltoc Authors
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


/* C interface of the hltoc solver library. All objects are opaque handles;
 * every call returns an hltoc_status and leaves a message for
 * hltoc_last_error() (per thread) when it fails. */
#ifndef HLTOC_HLTOC_H_
#define HLTOC_HLTOC_H_

#include <stddef.h>

#if defined(_WIN32)
#define HLTOC_API __declspec(dllexport)
#else
#define HLTOC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hltoc_status {
  HLTOC_OK = 0,
  HLTOC_ERR_CONFIG = 1,
  HLTOC_ERR_DOMAIN = 2,
  HLTOC_ERR_STRUCTURAL = 3,
  HLTOC_ERR_EVALUATION = 4,
  HLTOC_ERR_SINGULAR = 5,
  HLTOC_ERR_IO = 6,
  HLTOC_ERR_INVALID_ARGUMENT = 7,
  HLTOC_ERR_BUFFER_TOO_SMALL = 8,
  HLTOC_ERR_WRONG_KIND = 9,
  HLTOC_ERR_INTERNAL = 10
} hltoc_status;

typedef enum hltoc_solve_status {
  HLTOC_SOLVE_CONVERGED = 0,
  HLTOC_SOLVE_STALLED = 1,
  HLTOC_SOLVE_BUDGET_EXHAUSTED = 2
} hltoc_solve_status;

typedef enum hltoc_result_kind {
  HLTOC_RESULT_RUN = 0,
  HLTOC_RESULT_SWEEP = 1,
  HLTOC_RESULT_GRADIENTS = 2,
  HLTOC_RESULT_PROPERTIES = 3
} hltoc_result_kind;

typedef struct hltoc_config hltoc_config;
typedef struct hltoc_result hltoc_result;

HLTOC_API const char* hltoc_version(void);
/* Message of the last failed call on this thread, "" if none. */
HLTOC_API const char* hltoc_last_error(void);
HLTOC_API const char* hltoc_status_string(hltoc_status status);

/* -- configuration ------------------------------------------------------- */
HLTOC_API hltoc_status hltoc_config_create(hltoc_config** out);
/* "key = value" lines, '#' comments. */
HLTOC_API hltoc_status hltoc_config_load(const char* path, hltoc_config** out);
HLTOC_API hltoc_status hltoc_config_parse(const char* text, hltoc_config** out);
HLTOC_API void hltoc_config_destroy(hltoc_config* config);
HLTOC_API hltoc_status hltoc_config_set(hltoc_config* config, const char* key, const char* value);
/* "key=value" */
HLTOC_API hltoc_status hltoc_config_override(hltoc_config* config, const char* assignment);
HLTOC_API hltoc_status hltoc_config_validate(const hltoc_config* config);
/* Newline-separated warnings. Text getters copy at most size-1 bytes plus a
 * terminator; *needed (optional) receives the full size including it. A null
 * buffer with size 0 is a size query and succeeds. */
HLTOC_API hltoc_status hltoc_config_warnings(const hltoc_config* config, char* buf, size_t size,
                                             size_t* needed);

/* -- experiments --------------------------------------------------------- */
HLTOC_API hltoc_status hltoc_run(const hltoc_config* config, hltoc_result** out);
HLTOC_API hltoc_status hltoc_sweep(const hltoc_config* config, hltoc_result** out);
HLTOC_API hltoc_status hltoc_check_gradients(const hltoc_config* config, hltoc_result** out);
HLTOC_API hltoc_status hltoc_properties(const hltoc_config* config, hltoc_result** out);
HLTOC_API void hltoc_result_destroy(hltoc_result* result);

HLTOC_API hltoc_status hltoc_result_kind_of(const hltoc_result* result, hltoc_result_kind* kind);
/* Writes the result files into the configured output directory. */
HLTOC_API hltoc_status hltoc_result_write(const hltoc_result* result);
/* report.json content. */
HLTOC_API hltoc_status hltoc_result_json(const hltoc_result* result, char* buf, size_t size,
                                         size_t* needed);
/* Gradient and property results: every check passed. */
HLTOC_API hltoc_status hltoc_result_passed(const hltoc_result* result, int* passed);

/* Run and sweep results (a sweep reports its ADTOC comparison run). */
HLTOC_API hltoc_status hltoc_result_solve_status(const hltoc_result* result,
                                                 hltoc_solve_status* status);
HLTOC_API hltoc_status hltoc_result_iterations(const hltoc_result* result, int* iterations);
HLTOC_API hltoc_status hltoc_result_nstar(const hltoc_result* result, double* n_star);
HLTOC_API hltoc_status hltoc_result_tstar(const hltoc_result* result, double* t_star);
HLTOC_API hltoc_status hltoc_result_end_error(const hltoc_result* result, double* error);
HLTOC_API hltoc_status hltoc_result_lexicographic_monotone(const hltoc_result* result,
                                                           int* monotone);
/* Trajectory as n_rows x n_cols row-major doubles in trajectory.csv order
 * (empty control cells of the last row are NaN). */
HLTOC_API hltoc_status hltoc_result_trajectory_shape(const hltoc_result* result, int* rows,
                                                     int* cols);
HLTOC_API hltoc_status hltoc_result_trajectory(const hltoc_result* result, double* data,
                                               size_t count);

/* Sweep results only. -1 when no candidate is feasible. */
HLTOC_API hltoc_status hltoc_result_minimal_feasible_nstar(const hltoc_result* result,
                                                           int* n_star);
HLTOC_API hltoc_status hltoc_result_sweep_agrees(const hltoc_result* result, int* agree);

#ifdef __cplusplus
}
#endif

#endif  /* HLTOC_HLTOC_H_ */
