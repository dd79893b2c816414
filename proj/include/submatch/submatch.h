#ifndef SUBMATCH_H
#define SUBMATCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(SUBMATCH_BUILDING)
#define SUBMATCH_API __attribute__((visibility("default")))
#else
#define SUBMATCH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum submatch_status {
  SUBMATCH_OK = 0,
  SUBMATCH_E_INVALID_ARGUMENT = 1,
  SUBMATCH_E_OUT_OF_RANGE = 2,
  SUBMATCH_E_IO = 3,
  SUBMATCH_E_FORMAT = 4,
  SUBMATCH_E_CAPACITY = 5,
  SUBMATCH_E_MALFORMED_COST = 6,
  SUBMATCH_E_INTERNAL = 7
} submatch_status;

typedef enum submatch_backend { SUBMATCH_BACKEND_EXACT = 0, SUBMATCH_BACKEND_SAMPLED = 1 } submatch_backend;
typedef enum submatch_params { SUBMATCH_PARAMS_PRACTICAL = 0, SUBMATCH_PARAMS_PAPER = 1 } submatch_params;

typedef struct submatch_instance submatch_instance;
typedef struct submatch_result submatch_result;
typedef struct submatch_metric submatch_metric;
typedef struct submatch_distribution submatch_distribution;

typedef struct submatch_config {
  double alpha;        /* 0.85 */
  double beta;         /* 1.0 */
  double gamma;        /* 0.03 */
  double xi_pad;       /* 0.075 */
  submatch_backend backend;
  uint64_t seed;       /* 0 */
  double epsilon;      /* 0.3, sampled query knob */
  submatch_params params;
  int64_t T;           /* 6 */
  int64_t k;           /* 5 */
  double levels;       /* 0: T - 1 */
  double unit;         /* 0: derived */
  int64_t max_forest_rounds; /* 0: uncapped */
  int record_timings;  /* 0 */
} submatch_config;

SUBMATCH_API void submatch_config_default(submatch_config* config);
SUBMATCH_API const char* submatch_version(void);
/* Message of the last failed call on this thread; "" if none. */
SUBMATCH_API const char* submatch_last_error(void);

/* Instances. Cost reads through an instance are counted. */
SUBMATCH_API submatch_status submatch_instance_from_matrix(size_t n, const double* row_major,
                                                           submatch_instance** out);
/* generator: uniform | euclidean | one-two-metric | permutation. */
SUBMATCH_API submatch_status submatch_instance_generate(const char* generator, size_t n, uint64_t seed,
                                                        size_t dim, double p, submatch_instance** out);
SUBMATCH_API submatch_status submatch_instance_load(const char* path, submatch_instance** out);
SUBMATCH_API submatch_status submatch_instance_save(const submatch_instance* instance, const char* path,
                                                    int binary);
SUBMATCH_API size_t submatch_instance_size(const submatch_instance* instance);
SUBMATCH_API submatch_status submatch_instance_cost(const submatch_instance* instance, size_t u, size_t v,
                                                    double* out);
SUBMATCH_API uint64_t submatch_instance_queries(const submatch_instance* instance);
SUBMATCH_API void submatch_instance_reset_queries(submatch_instance* instance);
/* Euclidean instances only: row-major n x dim coordinates of side 0 (V0) or 1 (V1).
   Writes at most cap values; *count receives n * dim. */
SUBMATCH_API submatch_status submatch_instance_points(const submatch_instance* instance, int side,
                                                      double* out, size_t cap, size_t* count, size_t* dim);
SUBMATCH_API void submatch_instance_free(submatch_instance* instance);

/* Min-weight matching with outliers. */
SUBMATCH_API submatch_status submatch_estimate_mwm(submatch_instance* instance, const submatch_config* config,
                                                   submatch_result** out);
SUBMATCH_API double submatch_result_estimate(const submatch_result* result);
/* V1 index matched to V0 vertex u in the thresholded matching, or -1. */
SUBMATCH_API submatch_status submatch_result_mate(const submatch_result* result, size_t u, int64_t* out);
/* Vertices per side of the result matching. */
SUBMATCH_API size_t submatch_result_size(const submatch_result* result);
/* JSON report owned by the result. */
SUBMATCH_API const char* submatch_result_json(const submatch_result* result);
SUBMATCH_API void submatch_result_free(submatch_result* result);

/* Largest matching size with cost <= budget, within +-gamma n; config->gamma is the accuracy. */
SUBMATCH_API submatch_status submatch_knapsack(submatch_instance* instance, double budget,
                                               const submatch_config* config, double* size_out,
                                               double* xi_out);

/* Distributions over the points of a shared k x k table with values in [0, 1]. */
SUBMATCH_API submatch_status submatch_metric_from_matrix(size_t k, const double* row_major,
                                                         submatch_metric** out);
SUBMATCH_API submatch_status submatch_metric_load(const char* path, submatch_metric** out);
SUBMATCH_API void submatch_metric_free(submatch_metric* metric);
SUBMATCH_API submatch_status submatch_distribution_discrete(const submatch_metric* metric, size_t count,
                                                            const uint32_t* points, const double* masses,
                                                            submatch_distribution** out);
SUBMATCH_API submatch_status submatch_distribution_stream(const submatch_metric* metric, const char* path,
                                                          size_t support_bound,
                                                          submatch_distribution** out);
SUBMATCH_API uint64_t submatch_distribution_draws(const submatch_distribution* dist);
SUBMATCH_API void submatch_distribution_free(submatch_distribution* dist);

/* EMD estimate from 2m draws, m = ceil(4 n ln max(n, 2)); config->gamma is the accuracy.
   result_out may be NULL; otherwise it receives the underlying matching result. */
SUBMATCH_API submatch_status submatch_estimate_emd(submatch_distribution* mu, submatch_distribution* nu,
                                                   size_t n, const submatch_config* config,
                                                   double* estimate_out, uint64_t* draws_out,
                                                   submatch_result** result_out);
SUBMATCH_API uint64_t submatch_sample_complexity(size_t n);

/* Exact baseline (n <= 2000). */
SUBMATCH_API submatch_status submatch_exact_k_matching(const submatch_instance* instance, size_t k,
                                                       double* value_out);
/* out[j] = min cost of a size-j matching, j = 0..mu; *count receives mu + 1. */
SUBMATCH_API submatch_status submatch_exact_costs_by_size(const submatch_instance* instance, double* out,
                                                          size_t cap, size_t* count);
SUBMATCH_API submatch_status submatch_exact_emd(const double* mu, size_t k_mu, const double* nu, size_t k_nu,
                                                const double* metric, double* out);

#ifdef __cplusplus
}
#endif

#endif
