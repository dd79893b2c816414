#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "submatch/submatch.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static void test_errors(void) {
  submatch_instance* inst = NULL;
  double bad[1] = {-1.0};
  EXPECT(submatch_instance_from_matrix(1, bad, &inst) == SUBMATCH_E_MALFORMED_COST);
  EXPECT(inst == NULL);
  EXPECT(strlen(submatch_last_error()) > 0);
  EXPECT(submatch_instance_from_matrix(1, NULL, &inst) == SUBMATCH_E_INVALID_ARGUMENT);
  EXPECT(submatch_instance_generate("nope", 4, 1, 2, 0.5, &inst) == SUBMATCH_E_INVALID_ARGUMENT);
  EXPECT(submatch_instance_load("/nonexistent/instance.txt", &inst) == SUBMATCH_E_IO);
  EXPECT(strlen(submatch_version()) > 0);
}

static void test_instance_and_exact(void) {
  double c[9] = {1, 2, 3, 2, 3, 1, 3, 1, 2};
  submatch_instance* inst = NULL;
  EXPECT(submatch_instance_from_matrix(3, c, &inst) == SUBMATCH_OK);
  EXPECT(submatch_instance_size(inst) == 3);
  double x = 0;
  EXPECT(submatch_instance_cost(inst, 1, 2, &x) == SUBMATCH_OK && x == 1.0);
  EXPECT(submatch_instance_queries(inst) == 1);
  EXPECT(submatch_instance_cost(inst, 3, 0, &x) == SUBMATCH_E_OUT_OF_RANGE);
  submatch_instance_reset_queries(inst);
  EXPECT(submatch_instance_queries(inst) == 0);
  double v = 0;
  EXPECT(submatch_exact_k_matching(inst, 3, &v) == SUBMATCH_OK && fabs(v - 3.0) < 1e-12);
  EXPECT(submatch_exact_k_matching(inst, 4, &v) == SUBMATCH_E_INVALID_ARGUMENT);
  double by[4];
  size_t count = 0;
  EXPECT(submatch_exact_costs_by_size(inst, by, 4, &count) == SUBMATCH_OK && count == 4);
  EXPECT(by[0] == 0.0 && fabs(by[1] - 1.0) < 1e-12 && fabs(by[3] - 3.0) < 1e-12);
  EXPECT(submatch_exact_costs_by_size(inst, by, 2, &count) == SUBMATCH_OK && count == 4);
  submatch_instance_free(inst);

  double mu[2] = {0.5, 0.5}, nu[1] = {1.0}, metric[2] = {0.2, 0.6};
  double emd = 0;
  EXPECT(submatch_exact_emd(mu, 2, nu, 1, metric, &emd) == SUBMATCH_OK && fabs(emd - 0.4) < 1e-9);
}

static void test_estimate(void) {
  submatch_instance* inst = NULL;
  EXPECT(submatch_instance_generate("uniform", 60, 3, 2, 0.5, &inst) == SUBMATCH_OK);
  submatch_config cfg;
  submatch_config_default(&cfg);
  EXPECT(cfg.alpha == 0.85 && cfg.beta == 1.0 && cfg.T == 6 && cfg.k == 5);
  cfg.alpha = 0.7;
  cfg.gamma = 0.06;
  cfg.xi_pad = 0.15;
  cfg.seed = 4;
  submatch_result* r = NULL;
  EXPECT(submatch_estimate_mwm(inst, &cfg, &r) == SUBMATCH_OK);
  EXPECT(r != NULL);
  if (r) {
    double e = submatch_result_estimate(r);
    EXPECT(e >= 0);
    size_t matched = 0;
    for (size_t u = 0; u < 60; ++u) {
      int64_t m = -2;
      EXPECT(submatch_result_mate(r, u, &m) == SUBMATCH_OK);
      EXPECT(m >= -1 && m < 60);
      matched += m >= 0;
    }
    EXPECT(submatch_result_size(r) == 60);
    EXPECT(matched > 0);
    int64_t m;
    EXPECT(submatch_result_mate(r, 60, &m) == SUBMATCH_E_OUT_OF_RANGE);
    const char* json = submatch_result_json(r);
    EXPECT(json != NULL && strstr(json, "\"estimate\"") != NULL && strstr(json, "\"backend\": \"exact\"") != NULL);
    submatch_result_free(r);
  }
  EXPECT(submatch_instance_queries(inst) > 0);

  cfg.alpha = 0.5;
  EXPECT(submatch_estimate_mwm(inst, &cfg, &r) == SUBMATCH_OK);
  submatch_result_free(r);
  cfg.alpha = 1.5;
  EXPECT(submatch_estimate_mwm(inst, &cfg, &r) == SUBMATCH_E_INVALID_ARGUMENT);

  submatch_config_default(&cfg);
  cfg.gamma = 0.2;
  double size = -1, xi = -1;
  EXPECT(submatch_knapsack(inst, 1e9, &cfg, &size, &xi) == SUBMATCH_OK);
  EXPECT(xi == 1.0 && fabs(size - 60.0) < 1e-9);
  submatch_instance_free(inst);
}

static void test_emd(void) {
  double d[9] = {0, 0.5, 1, 0.5, 0, 0.5, 1, 0.5, 0};
  submatch_metric* metric = NULL;
  EXPECT(submatch_metric_from_matrix(3, d, &metric) == SUBMATCH_OK);
  double bad[1] = {2.0};
  submatch_metric* m2 = NULL;
  EXPECT(submatch_metric_from_matrix(1, bad, &m2) == SUBMATCH_E_MALFORMED_COST);
  uint32_t p0[1] = {0}, p2[1] = {2};
  double one[1] = {1.0};
  submatch_distribution *mu = NULL, *nu = NULL;
  EXPECT(submatch_distribution_discrete(metric, 1, p0, one, &mu) == SUBMATCH_OK);
  EXPECT(submatch_distribution_discrete(metric, 1, p2, one, &nu) == SUBMATCH_OK);
  submatch_config cfg;
  submatch_config_default(&cfg);
  cfg.gamma = 0.3;
  double est = -1;
  uint64_t draws = 0;
  EXPECT(submatch_estimate_emd(mu, nu, 3, &cfg, &est, &draws, NULL) == SUBMATCH_OK);
  EXPECT(fabs(est - 1.0) <= 0.3);
  EXPECT(draws == submatch_sample_complexity(3));
  EXPECT(submatch_distribution_draws(mu) + submatch_distribution_draws(nu) == draws);
  submatch_distribution_free(mu);
  submatch_distribution_free(nu);
  submatch_metric_free(metric);
}

int main(void) {
  test_errors();
  test_instance_and_exact();
  test_estimate();
  test_emd();
  if (failures) {
    fprintf(stderr, "%d C API checks failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
