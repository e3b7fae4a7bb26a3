#ifndef FHL_FHL_H
#define FHL_FHL_H

/* C interface to the fractal hitting lab.
 *
 * Every call returns an fhl_status. On failure the message for the calling
 * thread is available from fhl_last_error() until that thread's next call.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with fhl_string_free(). Handles are immutable once built and may
 * be shared between threads. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FHL_API __declspec(dllexport)
#else
#define FHL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values are stable; new codes are appended. */
typedef enum fhl_status {
  FHL_OK = 0,
  FHL_COORD_OUT_OF_RANGE = 1,
  FHL_NO_PARENT = 2,
  FHL_LEVEL_MISMATCH = 3,
  FHL_UNSUPPORTED_DIMENSION = 4,
  FHL_LEVEL_CAP_EXCEEDED = 5,
  FHL_SEARCH_OVERFLOW = 6,
  FHL_DEGENERATE_GENERATION = 7,
  FHL_DEPTH_INSUFFICIENT = 8,
  FHL_DEGENERATE_INPUT = 9,
  FHL_INSUFFICIENT_PRECISION = 10,
  FHL_SIDE_CONDITION_VIOLATED = 11,
  FHL_CONFIG_INVALID = 12,
  FHL_INVALID_ARGUMENT = 13,
  FHL_IO = 14,
  FHL_BUDGET_EXCEEDED = 15,
  FHL_NULL_ARGUMENT = 100,
  FHL_INTERNAL = 101
} fhl_status;

typedef struct fhl_model fhl_model;
typedef struct fhl_target fhl_target;
typedef struct fhl_schedule fhl_schedule;

FHL_API const char* fhl_version(void);
FHL_API const char* fhl_status_name(fhl_status status);
FHL_API const char* fhl_last_error(void);
FHL_API void fhl_string_free(char* s);

/* Dyadic level cap. FHL_LEVEL_CAP in the environment takes precedence. */
FHL_API fhl_status fhl_set_level_cap(int cap);
FHL_API int fhl_level_cap(void);

/* Experiment kinds accepted by fhl_run_manifest, in a fixed order. */
FHL_API size_t fhl_kind_count(void);
FHL_API const char* fhl_kind_name(size_t index);

/* Models, from the "model" object of a manifest, e.g.
 * {"kind":"bernoulli","gamma":"1/2"} or {"kind":"prop14","gamma0":"1/2"}. */
FHL_API fhl_status fhl_model_create(const char* json, fhl_model** out);
FHL_API void fhl_model_free(fhl_model* model);
FHL_API fhl_status fhl_model_hit_prob(const fhl_model* model, int level, double* out);
/* "p/q", or FHL_INSUFFICIENT_PRECISION when P_n is irrational. */
FHL_API fhl_status fhl_model_hit_prob_exact(const fhl_model* model, int level, char** out);

/* Targets, from the "target" object of a manifest, e.g.
 * {"kind":"uniform","count":2,"ratio":"1/16","depth":12}. */
FHL_API fhl_status fhl_target_create(const char* json, fhl_target** out);
FHL_API void fhl_target_free(fhl_target* target);
/* Half-open cells meeting the target, as a decimal string. */
FHL_API fhl_status fhl_target_covering_count(const fhl_target* target, int level, char** out);
/* Closed cubes meeting the target, as a decimal string. */
FHL_API fhl_status fhl_target_closed_count(const fhl_target* target, int level, char** out);

/* Cantor schedules, from a Cantor "target" object. */
FHL_API fhl_status fhl_schedule_create(const char* json, fhl_schedule** out);
FHL_API void fhl_schedule_free(fhl_schedule* schedule);
FHL_API size_t fhl_schedule_depth(const fhl_schedule* schedule);
/* log2 N_k and log2 l_k for generation k (1-based). */
FHL_API fhl_status fhl_schedule_generation(const fhl_schedule* schedule, size_t k, double* log2_count,
                                           double* log2_length);
/* Tab-separated "generation index left right" rows with p/q endpoints. */
FHL_API fhl_status fhl_schedule_export_levels(const fhl_schedule* schedule, size_t depth, char** out);

typedef struct fhl_window_result {
  double oracle;
  double empirical;
  double radius;
  uint64_t hits;
  uint64_t trials;
  int agrees;
} fhl_window_result;

/* Monte Carlo estimate of P(some level in [n_lo, n_hi] has a chosen cube
 * meeting the target) against the exact oracle. */
FHL_API fhl_status fhl_window_hit(const fhl_model* model, const fhl_target* target, int n_lo, int n_hi,
                                  uint64_t trials, uint64_t seed, unsigned workers, fhl_window_result* out);

/* Cube extent, parent, children and volume as a JSON object. */
FHL_API fhl_status fhl_grid_describe(int level, const uint64_t* coords, size_t dim, int half_open, char** out);

typedef void (*fhl_record_fn)(const char* jsonl_line, void* user);

typedef struct fhl_run_options {
  const char* kind;    /* subcommand; NULL keeps the config's kind */
  int has_seed;
  uint64_t seed;
  int has_trials;
  uint64_t trials;
  unsigned workers;    /* 0 keeps the config's value */
  const char* out_dir; /* NULL keeps the config's value */
  fhl_record_fn on_record;
  void* user;
} fhl_run_options;

typedef struct fhl_run_result {
  int passed;
  size_t rows;
  size_t failures;
  char* digest;
  char* jsonl;
  char* csv;
} fhl_run_result;

/* Parses, validates and runs a manifest given as JSON text. Assertion
 * failures are reported through result->passed, not the status. */
FHL_API fhl_status fhl_run_manifest(const char* config_json, const fhl_run_options* options, fhl_run_result* result);
FHL_API void fhl_run_result_free(fhl_run_result* result);

#ifdef __cplusplus
}
#endif

#endif
