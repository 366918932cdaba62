// SPDX-License-Identifier: Apache-2.0
//
// passr - joint transmit and pinching beamforming for PASS-assisted symbiotic radio
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#ifndef PASSR_PASSR_H
#define PASSR_PASSR_H

/* C interface to the PASS symbiotic-radio experiment library.
 *
 * Objects are opaque handles owned by the caller and released with the matching _free call.
 * Every fallible call returns a passr_status; on failure passr_last_error() describes the
 * problem until the next call on the same thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PASSR_BUILDING_LIBRARY)
#define PASSR_API __declspec(dllexport)
#else
#define PASSR_API __declspec(dllimport)
#endif
#else
#define PASSR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum passr_status
{
    PASSR_OK = 0,
    PASSR_ERROR_INVALID_ARGUMENT = 1, /* null handle, bad index, bad option value */
    PASSR_ERROR_CONFIG = 2,           /* spec content violates the schema or an invariant */
    PASSR_ERROR_IO = 3,               /* file could not be read or written */
    PASSR_ERROR_INTERNAL = 4          /* unexpected exception */
} passr_status;

/* Output file selection for passr_results_write. */
#define PASSR_OUTPUT_RAW 1u
#define PASSR_OUTPUT_AGGREGATED 2u
#define PASSR_OUTPUT_TIMING 4u
#define PASSR_OUTPUT_TRACE 8u

typedef struct passr_experiment passr_experiment;
typedef struct passr_results passr_results;

/* One result row; string fields point into the owning passr_results. */
typedef struct passr_row
{
    const char* solver;
    const char* status; /* "ok", "infeasible" or "failed" */
    const char* message;
    double sweep_value;
    int realization;
    uint64_t seed;
    double sum_rate;
    double kl;
    double pe_upper_bound;
    double residual_power;
    double residual_detection;
    double residual_spacing;
    double residual_range;
    int iterations;
    double wall_ms;
    size_t trace_length;
} passr_row;

PASSR_API const char* passr_version(void);
PASSR_API const char* passr_last_error(void);
PASSR_API const char* passr_status_string(passr_status status);

PASSR_API passr_status passr_experiment_load(const char* path, passr_experiment** out);
PASSR_API passr_status passr_experiment_parse(const char* text, passr_experiment** out);
PASSR_API void passr_experiment_free(passr_experiment* spec);

PASSR_API passr_status passr_experiment_set_seed(passr_experiment* spec, uint64_t seed);
/* Comma-separated list of lgd, scapso, elementwise, fixedpa, mimo. */
PASSR_API passr_status passr_experiment_set_solvers(passr_experiment* spec, const char* list);
PASSR_API passr_status passr_experiment_set_realizations(passr_experiment* spec, int count);
PASSR_API passr_status passr_experiment_validate(const passr_experiment* spec);

/* Canonical text form of the spec. Writes at most `size` bytes including the terminator and
 * stores the full length (without terminator) in *needed when it is not null. */
PASSR_API passr_status passr_experiment_describe(const passr_experiment* spec, char* buffer, size_t size,
                                                 size_t* needed);
/* Number of result rows a run produces: solvers x sweep values x realizations. */
PASSR_API passr_status passr_experiment_row_count(const passr_experiment* spec, size_t* count);

/* Runs the experiment on up to `threads` workers. Solver failures are recorded as rows with
 * status "failed"; they do not make this call fail. */
PASSR_API passr_status passr_run(const passr_experiment* spec, int threads, passr_results** out);
PASSR_API void passr_results_free(passr_results* results);

PASSR_API size_t passr_results_row_count(const passr_results* results);
PASSR_API size_t passr_results_failure_count(const passr_results* results);
PASSR_API size_t passr_results_infeasible_count(const passr_results* results);
PASSR_API passr_status passr_results_get_row(const passr_results* results, size_t index, passr_row* row);
/* Copies up to `capacity` trace values of row `index` into `values`. */
PASSR_API passr_status passr_results_get_trace(const passr_results* results, size_t index, double* values,
                                               size_t capacity, size_t* written);
/* Writes the selected PASSR_OUTPUT_* files into `directory`, creating it if needed. */
PASSR_API passr_status passr_results_write(const passr_results* results, const char* directory, unsigned files);

#ifdef __cplusplus
}
#endif

#endif /* PASSR_PASSR_H */
