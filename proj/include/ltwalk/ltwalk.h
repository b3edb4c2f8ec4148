// Copyright 2026 The ltwalk Authors
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

/* C interface to the local-time walk library. All functions report failures
 * through ltw_status; ltw_last_error() holds the message for the calling
 * thread until its next failing call. Handles are opaque and owned by the
 * caller, who releases them with the matching *_free function. */
#ifndef LTWALK_LTWALK_H
#define LTWALK_LTWALK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LTW_API __declspec(dllexport)
#else
#define LTW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ltw_status {
  LTW_OK = 0,
  LTW_E_INVALID_ARGUMENT = 1,
  LTW_E_NEGATIVE_PROBABILITY = 2,
  LTW_E_EMPTY_SUPPORT = 3,
  LTW_E_DIMENSION_MISMATCH = 4,
  LTW_E_MASS_NOT_ONE = 5,
  LTW_E_UNKNOWN_PRESET = 6,
  LTW_E_PARAMETER_OUT_OF_RANGE = 7,
  LTW_E_UNREGISTERED_OBSERVABLE = 8,
  LTW_E_NEGATIVE_ALPHA = 9,
  LTW_E_MEMORY_CAP_EXCEEDED = 10,
  LTW_E_DIMENSION_UNSUPPORTED = 11,
  LTW_E_NUMERICAL_NEGATIVITY = 12,
  LTW_E_GAMMA_OUT_OF_RANGE = 13,
  LTW_E_HORIZON_EXCEEDED = 14,
  LTW_E_SERIES_DIVERGENT = 15,
  LTW_E_NOT_MONOTONE = 16,
  LTW_E_ITERATED_LOG_UNDEFINED = 17,
  LTW_E_RECURRENT_WALK_REFUSED = 18,
  LTW_E_DELTA_OUT_OF_RANGE = 19,
  LTW_E_CONFIG_PARSE = 20,
  LTW_E_IO = 21,
  /* A verify command ran to completion but some certificate Fails. */
  LTW_VERIFICATION_FAILED = 100,
  LTW_E_INTERNAL = 101
} ltw_status;

LTW_API const char* ltw_version(void);
LTW_API const char* ltw_status_name(ltw_status status);
LTW_API const char* ltw_last_error(void);
/* Process exit code for a status: 0 ok, 1 verification failed,
 * 3 memory cap exceeded, 2 anything else. */
LTW_API int ltw_exit_code(ltw_status status);

/* Step distributions. */
typedef struct ltw_dist ltw_dist;
LTW_API ltw_status ltw_dist_simple(int dim, ltw_dist** out);
LTW_API ltw_status ltw_dist_biased(double p, ltw_dist** out);
/* sites holds n_atoms * dim coordinates, row-major. */
LTW_API ltw_status ltw_dist_custom(int dim, size_t n_atoms, const int64_t* sites, const double* probs,
                                   ltw_dist** out);
LTW_API int ltw_dist_dim(const ltw_dist* dist);
LTW_API void ltw_dist_free(ltw_dist* dist);

/* Observables f : N -> [0, inf). */
typedef struct ltw_observable ltw_observable;
LTW_API ltw_status ltw_observable_power(double alpha, ltw_observable** out);
LTW_API ltw_status ltw_observable_indicator(const int64_t* members, size_t count, ltw_observable** out);
LTW_API ltw_status ltw_observable_exp_capped(double c, double p, ltw_observable** out);
LTW_API ltw_status ltw_observable_eval(const ltw_observable* f, int64_t i, double* out);
LTW_API void ltw_observable_free(ltw_observable* f);

/* One trajectory with its streaming local-time field. */
typedef struct ltw_walk ltw_walk;
typedef struct ltw_walk_stats {
  int64_t n;
  int64_t range;
  int64_t l_max;
} ltw_walk_stats;
LTW_API ltw_status ltw_walk_create(const ltw_dist* dist, uint64_t seed, uint64_t replica,
                                   const ltw_observable* const* observables, size_t n_observables,
                                   ltw_walk** out);
LTW_API ltw_status ltw_walk_advance(ltw_walk* walk, uint64_t steps);
LTW_API ltw_status ltw_walk_stats_get(const ltw_walk* walk, ltw_walk_stats* out);
/* Running G_n(f) of the id-th observable given at creation. */
LTW_API ltw_status ltw_walk_G(const ltw_walk* walk, size_t id, double* out);
LTW_API ltw_status ltw_walk_L(const ltw_walk* walk, double alpha, double* out);
/* Copies Q_n(0..l_max) into buf (up to cap entries); *len receives l_max + 1. */
LTW_API ltw_status ltw_walk_histogram(const ltw_walk* walk, int64_t* buf, size_t cap, size_t* len);
LTW_API void ltw_walk_free(ltw_walk* walk);

/* Return and first-return probabilities with the escape probability. */
typedef struct ltw_series ltw_series;
typedef struct ltw_gamma_info {
  double estimate;
  double error_bound;
  double gamma_n; /* P{tau > horizon} */
  double upper;
  int flag; /* 0 transient, 1 recurrent, 2 trivially transient */
} ltw_gamma_info;
/* mem_cap_mb == 0 keeps the default cap. */
LTW_API ltw_status ltw_series_create(const ltw_dist* dist, size_t horizon, size_t mem_cap_mb, ltw_series** out);
LTW_API size_t ltw_series_horizon(const ltw_series* series);
LTW_API ltw_status ltw_series_u(const ltw_series* series, size_t n, double* out);
LTW_API ltw_status ltw_series_f(const ltw_series* series, size_t n, double* out);
LTW_API ltw_status ltw_series_gamma(const ltw_series* series, ltw_gamma_info* out);
LTW_API void ltw_series_free(ltw_series* series);

/* Exact expectations for n up to the series horizon. */
LTW_API ltw_status ltw_exact_EQ(const ltw_series* series, size_t n, size_t j, double* out);
LTW_API ltw_status ltw_exact_EG(const ltw_series* series, const ltw_observable* f, size_t n, double* out);
LTW_API ltw_status ltw_limit_constant(const ltw_observable* f, double gamma, double tol, double* out);

LTW_API ltw_status ltw_lambda_star(double gamma, double* out);
LTW_API ltw_status ltw_maxlocal_tail_bound(int64_t n, int64_t t, double gamma, double* out);
LTW_API ltw_status ltw_maxlocal_proposition_bound(double n, double eps, int m, double gamma, double* out);

/* Config-driven commands. Outputs land in out_dir (default "ltwalk_out"). */
typedef struct ltw_run_options {
  int has_seed;
  uint64_t seed;
  unsigned threads;   /* 0 keeps the config value */
  size_t mem_cap_mb;  /* 0 keeps the config value */
  const char* out_dir;
  int verbose;        /* progress lines on stdout */
} ltw_run_options;

LTW_API void ltw_run_options_init(ltw_run_options* options);
LTW_API ltw_status ltw_cmd_simulate(const char* config_path, const ltw_run_options* options);
LTW_API ltw_status ltw_cmd_exact(const char* config_path, const ltw_run_options* options);
/* suite: slln, variance, maxlocal, conditions, subsequence, gamma,
 * truncation or all. */
LTW_API ltw_status ltw_cmd_verify(const char* config_path, const char* suite, const ltw_run_options* options);
LTW_API ltw_status ltw_cmd_gamma(const char* config_path, const ltw_run_options* options);

#ifdef __cplusplus
}
#endif

#endif /* LTWALK_LTWALK_H */
