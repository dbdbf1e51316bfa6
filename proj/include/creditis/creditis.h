// Copyright 2026 The creditis Authors
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

/* C interface to the creditis library. Objects are opaque handles released
 * with the matching *_free function. Every fallible call returns a
 * creditis_status; on failure creditis_last_error() describes the problem
 * for the calling thread. */
#ifndef CREDITIS_CREDITIS_H
#define CREDITIS_CREDITIS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(CREDITIS_BUILDING_LIBRARY)
#define CREDITIS_API __declspec(dllexport)
#else
#define CREDITIS_API __declspec(dllimport)
#endif
#else
#define CREDITIS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum creditis_status {
  CREDITIS_OK = 0,
  CREDITIS_E_INVALID_ARGUMENT = 1,
  CREDITIS_E_DOMAIN = 2,
  CREDITIS_E_CONFIG = 3,
  CREDITIS_E_NUMERICAL = 4,
  CREDITIS_E_DEGENERATE_PILOT = 5,
  CREDITIS_E_IO = 6,
  CREDITIS_E_INTERNAL = 7
} creditis_status;

CREDITIS_API const char* creditis_version(void);
CREDITIS_API const char* creditis_status_name(creditis_status status);
/* Message of the last failed call on this thread; "" when there is none. */
CREDITIS_API const char* creditis_last_error(void);
/* 1-based config line of the last CREDITIS_E_CONFIG failure, 0 if unknown. */
CREDITIS_API int creditis_last_error_line(void);
/* Releases strings returned through char** out-parameters. */
CREDITIS_API void creditis_string_free(char* text);

/* Run configuration --------------------------------------------------- */

typedef struct creditis_config creditis_config;

CREDITIS_API creditis_status creditis_config_parse(const char* text, creditis_config** out);
CREDITIS_API creditis_status creditis_config_load(const char* path, creditis_config** out);
CREDITIS_API void creditis_config_free(creditis_config* config);
/* Overrides one key, e.g. ("experiment", "seed", "7"). */
CREDITIS_API creditis_status creditis_config_set(creditis_config* config, const char* section,
                                                 const char* key, const char* value);
/* Canonical text of the configuration. */
CREDITIS_API creditis_status creditis_config_serialize(const creditis_config* config,
                                                       char** text);
/* 16 hex digits plus the terminator. */
CREDITIS_API creditis_status creditis_config_hash(const creditis_config* config, char out[17]);
/* Builds and validates the model, shock law and experiment without sampling. */
CREDITIS_API creditis_status creditis_config_validate(const creditis_config* config);

/* Reports ------------------------------------------------------------- */

typedef struct creditis_report creditis_report;

/* Borrowed view of one report row; strings live as long as the report. */
typedef struct creditis_row {
  const char* experiment_id;
  const char* mode;
  double estimate;
  double variance;
  double std_error;
  double vr_factor;
  int iterations;
  int converged;
  double search_time_s;
  double estimate_time_s;
  uint64_t seed;
  const char* config_hash;
  int has_ref_estimate;
  double ref_estimate;
  int has_ref_vr;
  double ref_vr;
  const char* note;
} creditis_row;

CREDITIS_API size_t creditis_report_row_count(const creditis_report* report);
CREDITIS_API creditis_status creditis_report_row(const creditis_report* report, size_t index,
                                                 creditis_row* out);
/* Delimited text with header; timed = 0 blanks the wall-clock columns. */
CREDITIS_API creditis_status creditis_report_format(const creditis_report* report,
                                                    char delimiter, int timed, char** text);
/* Output path and delimiter requested by the run configuration; the path is
 * "" for stdout or for table reports. */
CREDITIS_API const char* creditis_report_output_path(const creditis_report* report);
CREDITIS_API char creditis_report_delimiter(const creditis_report* report);
/* 1 when every importance-sampling row converged. */
CREDITIS_API int creditis_report_all_converged(const creditis_report* report);
CREDITIS_API void creditis_report_free(creditis_report* report);

/* Runs the configured experiment (crude, IS or both). */
CREDITIS_API creditis_status creditis_run(const creditis_config* config, creditis_report** out);

typedef struct creditis_table_options {
  int has_seed;
  uint64_t seed;
  uint64_t b1; /* 0 keeps the table default */
  uint64_t b2;
  int threads; /* values below 1 mean 1 */
} creditis_table_options;

CREDITIS_API void creditis_table_options_init(creditis_table_options* options);
/* Table ids 1-10 and 12; NULL options use the defaults. */
CREDITIS_API creditis_status creditis_reproduce_table(int id,
                                                      const creditis_table_options* options,
                                                      creditis_report** out);

typedef struct creditis_demo_options {
  uint64_t samples;
  uint64_t pilot;
  uint64_t seed;
} creditis_demo_options;

CREDITIS_API void creditis_demo_options_init(creditis_demo_options* options);
/* family: normal, mvn2, gamma or mixture; event e.g. "x>4", "sum>5". */
CREDITIS_API creditis_status creditis_tilt_demo(const char* family, const char* event,
                                                const creditis_demo_options* options,
                                                creditis_report** out);

/* Loss distribution ---------------------------------------------------- */

/* pmf of L = sum c_k B_k with independent B_k ~ Bernoulli(p_k) by Fourier
 * inversion. pmf must hold sum(c) + 1 entries. */
CREDITIS_API creditis_status creditis_loss_pmf(const double* p, const int64_t* exposures,
                                               size_t n, double* pmf, size_t pmf_len);
/* P(L > tau), accurate far into the tail. */
CREDITIS_API creditis_status creditis_loss_tail(const double* p, const int64_t* exposures,
                                                size_t n, int64_t tau, double* out);

#ifdef __cplusplus
}
#endif

#endif /* CREDITIS_CREDITIS_H */
