//
// Copyright 2026 The mixsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#ifndef MIXSYNTH_MIXSYNTH_H_
#define MIXSYNTH_MIXSYNTH_H_

/*
 * C interface to the mixsynth shared library.
 *
 * Every fallible function returns a mixsynth_status. On failure a message is
 * available from mixsynth_last_error() on the calling thread until the next
 * call into the library from that thread. Handles are opaque and must be
 * released with their matching free/close function.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MIXSYNTH_API __declspec(dllexport)
#else
#define MIXSYNTH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mixsynth_status {
  MIXSYNTH_OK = 0,
  MIXSYNTH_PARTIAL = 1,   /* command completed with item-level failures */
  MIXSYNTH_NOT_FOUND = 2, /* lookup found nothing, e.g. no boxed answer */
  MIXSYNTH_ERR_INVALID_ARGUMENT = -1,
  MIXSYNTH_ERR_INSUFFICIENT_BUFFER = -2,
  MIXSYNTH_ERR_IO = -10,
  MIXSYNTH_ERR_SCHEMA = -11,
  MIXSYNTH_ERR_DUPLICATE = -12,
  MIXSYNTH_ERR_PRECONDITION = -13,
  MIXSYNTH_ERR_PROVIDER = -14,
  MIXSYNTH_ERR_PARSE = -15,
  MIXSYNTH_ERR_CONFIG = -16,
  MIXSYNTH_ERR_MISSING_ARTIFACT = -17,
  MIXSYNTH_ERR_INTERNAL = -99
} mixsynth_status;

typedef struct mixsynth_pipeline mixsynth_pipeline;
typedef struct mixsynth_corpus mixsynth_corpus;

typedef struct mixsynth_options {
  int has_seed;            /* nonzero: `seed` overrides the configured master seed */
  uint64_t seed;
  int force_mock;          /* nonzero: every provider role uses the offline mock */
  int resume;              /* nonzero: skip commands whose logged inputs are unchanged */
  const char* review_file; /* annotated batch for review-import; NULL for the default */
} mixsynth_options;

MIXSYNTH_API void mixsynth_options_init(mixsynth_options* opts);

MIXSYNTH_API const char* mixsynth_version(void);
MIXSYNTH_API const char* mixsynth_last_error(void);
MIXSYNTH_API const char* mixsynth_status_name(int status);

/* Pipeline commands, by index; NULL past the end. */
MIXSYNTH_API const char* mixsynth_command_name(size_t index);

/* ---- pipeline ---------------------------------------------------------- */

MIXSYNTH_API int mixsynth_pipeline_open(mixsynth_pipeline** out, const char* config_path,
                                        const char* out_dir, const mixsynth_options* opts);
MIXSYNTH_API void mixsynth_pipeline_close(mixsynth_pipeline* pipeline);

/* Runs one command. Returns MIXSYNTH_OK, MIXSYNTH_PARTIAL or an error. */
MIXSYNTH_API int mixsynth_pipeline_run(mixsynth_pipeline* pipeline, const char* command);

/* JSON report of the last successful or partial run; "" before any run.
 * The pointer stays valid until the next run or close. */
MIXSYNTH_API const char* mixsynth_pipeline_last_report(const mixsynth_pipeline* pipeline);

/* ---- corpus ------------------------------------------------------------ */

MIXSYNTH_API int mixsynth_corpus_load(mixsynth_corpus** out, const char* path, const char* source_tag);
MIXSYNTH_API void mixsynth_corpus_free(mixsynth_corpus* corpus);
MIXSYNTH_API int mixsynth_corpus_size(const mixsynth_corpus* corpus, size_t* out);

/* Writes NUL-terminated JSON stats into buf. *len holds the capacity on
 * input and the required size including the NUL on output. */
MIXSYNTH_API int mixsynth_corpus_stats_json(const mixsynth_corpus* corpus, char* buf, size_t* len);

/* ---- kernels ----------------------------------------------------------- */

MIXSYNTH_API int mixsynth_cosine(const double* a, const double* b, size_t dimension, double* out);

/* Last \boxed{...} content; same buffer protocol as the stats call.
 * Returns MIXSYNTH_NOT_FOUND when there is no well-formed boxed answer. */
MIXSYNTH_API int mixsynth_extract_boxed(const char* text, char* buf, size_t* len);

MIXSYNTH_API int mixsynth_ngram_degeneracy(const char* text, size_t n, double* duplicate_ratio,
                                           size_t* max_consecutive);

/* category is "hybrid" or "decomposed". */
MIXSYNTH_API int mixsynth_nominal_difficulty(const char* category, double low, double high, double* out);

#ifdef __cplusplus
}
#endif

#endif /* MIXSYNTH_MIXSYNTH_H_ */
