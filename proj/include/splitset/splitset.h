/* C interface to the split-point inference library.
 *
 * Every fallible call returns a splitset_status. On failure the message for
 * the calling thread is available from splitset_last_error() until the next
 * failing call on that thread. Objects returned through out-parameters are
 * owned by the caller and released with the matching *_destroy function.
 */
#ifndef SPLITSET_SPLITSET_H
#define SPLITSET_SPLITSET_H

#include <stddef.h>
#include <stdint.h>

#if defined(SPLITSET_BUILDING_LIBRARY)
#define SPLITSET_API __attribute__((visibility("default")))
#else
#define SPLITSET_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum splitset_status {
  SPLITSET_OK = 0,
  SPLITSET_E_INVALID_ARGUMENT = 1,
  SPLITSET_E_PARSE = 2,
  SPLITSET_E_CONFIG = 3,
  SPLITSET_E_IO = 4,
  SPLITSET_E_DEGENERATE_SAMPLE = 5,
  SPLITSET_E_EMPTY_SIDE = 6,
  SPLITSET_E_DEGENERATE_LEVELS = 7,
  SPLITSET_E_TOO_FEW_POINTS = 8,
  SPLITSET_E_NONPOSITIVE_ESTIMATE = 9,
  SPLITSET_E_SINGULAR_DESIGN = 10,
  SPLITSET_E_UNSTABLE = 11,
  SPLITSET_E_EMPTY_SET = 12,
  SPLITSET_E_LEVEL_OUT_OF_RANGE = 13,
  SPLITSET_E_BLOCK_TOO_SMALL = 14,
  SPLITSET_E_BLOCK_TOO_LARGE = 15,
  SPLITSET_E_DOMAIN = 16,
  SPLITSET_E_DEGENERATE_RATIO = 17,
  SPLITSET_E_INTERNAL = 99
} splitset_status;

SPLITSET_API const char* splitset_version(void);

/* Name such as "Unstable"; "Ok" for SPLITSET_OK. */
SPLITSET_API const char* splitset_status_name(splitset_status status);

/* 0 ok, 2 usage, 3 data, 4 numeric or instability, 1 internal. */
SPLITSET_API int splitset_status_exit_code(splitset_status status);

SPLITSET_API const char* splitset_last_error(void);

/* Owned text buffer (JSON reports, TSV tables). */
typedef struct splitset_text splitset_text;
SPLITSET_API const char* splitset_text_data(const splitset_text* text);
SPLITSET_API size_t splitset_text_size(const splitset_text* text);
SPLITSET_API void splitset_text_destroy(splitset_text* text);

SPLITSET_API splitset_status splitset_write_text_file(const char* path, const splitset_text* text);

typedef struct splitset_sample splitset_sample;

SPLITSET_API splitset_status splitset_sample_create(const double* x, const double* y, size_t n,
                                                    splitset_sample** out);
/* CSV with header "x,y". */
SPLITSET_API splitset_status splitset_sample_read_csv(const char* path, splitset_sample** out);
SPLITSET_API splitset_status splitset_sample_write_csv(const splitset_sample* sample,
                                                       const char* path);
SPLITSET_API size_t splitset_sample_size(const splitset_sample* sample);
SPLITSET_API void splitset_sample_destroy(splitset_sample* sample);

typedef struct splitset_stump_fit {
  double d_hat;
  double beta_l;
  double beta_u;
  double rss;
  size_t n_left;
} splitset_stump_fit;

SPLITSET_API splitset_status splitset_fit_stump(const splitset_sample* sample, size_t min_side,
                                                splitset_stump_fit* out);

typedef struct splitset_fit_options {
  const char* model;     /* "stump" or "poly:kl,ku" */
  const char* link;      /* "identity", "logit" or "log" */
  size_t min_side;
  const char* bandwidth; /* "cv" or "fixed:h" */
} splitset_fit_options;

SPLITSET_API void splitset_fit_options_init(splitset_fit_options* options);

/* JSON fit report. */
SPLITSET_API splitset_status splitset_fit_report(const splitset_sample* sample,
                                                 const splitset_fit_options* options,
                                                 splitset_text** out);

typedef struct splitset_ci_options {
  const char* method;    /* wald, rss1, rss2, pivot, subsample */
  double alpha;
  double gamma;
  size_t subsamples;
  uint64_t seed;
  const char* nuisance;  /* "auto" or "manual:p,F,fprime,sigma2" */
  const char* bandwidth;
  size_t min_side;
  const char* model;
  const char* link;
} splitset_ci_options;

SPLITSET_API void splitset_ci_options_init(splitset_ci_options* options);

typedef struct splitset_confidence_set splitset_confidence_set;

SPLITSET_API splitset_status splitset_ci(const splitset_sample* sample,
                                         const splitset_ci_options* options,
                                         splitset_confidence_set** out);
SPLITSET_API size_t splitset_cs_component_count(const splitset_confidence_set* set);
SPLITSET_API splitset_status splitset_cs_component(const splitset_confidence_set* set, size_t i,
                                                   double* lo, double* hi);
SPLITSET_API void splitset_cs_longest(const splitset_confidence_set* set, double* lo, double* hi);
SPLITSET_API double splitset_cs_point_estimate(const splitset_confidence_set* set);
/* JSON report; valid until the set is destroyed. */
SPLITSET_API const char* splitset_cs_report(const splitset_confidence_set* set);
SPLITSET_API void splitset_cs_destroy(splitset_confidence_set* set);

/* Coverage experiment from a JSON scenario file; format "long" or "wide". */
SPLITSET_API splitset_status splitset_simulate_file(const char* path, const char* format,
                                                    splitset_text** out);
SPLITSET_API splitset_status splitset_simulate_json(const char* json, const char* format,
                                                    splitset_text** out);

typedef struct splitset_quantile_options {
  const char* dist;      /* "chernoff" or "maxq1" */
  const double* levels;  /* upper-tail levels; NULL or empty for the whole table */
  size_t n_levels;
  int regenerate;
  size_t reps;
  double half_width;
  double step;
  uint64_t seed;
} splitset_quantile_options;

SPLITSET_API void splitset_quantile_options_init(splitset_quantile_options* options);
SPLITSET_API splitset_status splitset_quantiles(const splitset_quantile_options* options,
                                                splitset_text** out);

#ifdef __cplusplus
}
#endif

#endif
