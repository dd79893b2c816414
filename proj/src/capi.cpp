#include "submatch/submatch.h"

#include <cmath>
#include <new>
#include <string>

#include "submatch/baseline.hpp"
#include "submatch/emd.hpp"
#include "submatch/error.hpp"
#include "submatch/generators.hpp"
#include "submatch/io.hpp"
#include "submatch/pipeline.hpp"
#include "submatch/report.hpp"

struct submatch_instance {
  std::shared_ptr<const submatch::CostFunction> fn;
  submatch::BipartiteInstance instance;
};

struct submatch_result {
  submatch::MwmEstimate mwm;
  std::string json;
};

struct submatch_metric {
  std::shared_ptr<const submatch::MetricTable> table;
};

struct submatch_distribution {
  std::unique_ptr<submatch::DistributionSource> source;
};

namespace {

using namespace submatch;

thread_local std::string g_last_error;

template <class F>
submatch_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return SUBMATCH_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<submatch_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SUBMATCH_E_CAPACITY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SUBMATCH_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorCode::InvalidArgument, std::string("null ") + what);
}

Backend backend_of(const submatch_config& c) {
  Backend b;
  require(c.backend == SUBMATCH_BACKEND_EXACT || c.backend == SUBMATCH_BACKEND_SAMPLED, "unknown backend");
  b.kind = c.backend == SUBMATCH_BACKEND_SAMPLED ? BackendKind::Sampled : BackendKind::Exact;
  b.seed = c.seed;
  require(c.epsilon > 0 && c.epsilon < 1, "epsilon must be in (0, 1)");
  b.epsilon = c.epsilon;
  return b;
}

PipelineOptions options_of(const submatch_config& c) {
  require(c.params == SUBMATCH_PARAMS_PRACTICAL || c.params == SUBMATCH_PARAMS_PAPER, "unknown params");
  PipelineOptions o;
  o.mode = c.params == SUBMATCH_PARAMS_PAPER ? ParameterMode::Paper : ParameterMode::Practical;
  o.T = c.T;
  o.k = c.k;
  require(c.levels >= 0 && c.unit >= 0, "levels and unit must be >= 0");
  o.levels = c.levels;
  o.unit = c.unit;
  o.max_forest_rounds = c.max_forest_rounds;
  return o;
}

ReductionConfig reduction_of(const submatch_config& c) {
  ReductionConfig r;
  r.alpha = c.alpha;
  r.beta = c.beta;
  r.gamma = c.gamma;
  r.xi_pad = c.xi_pad;
  r.validate();
  return r;
}

submatch_instance* wrap(std::shared_ptr<const CostFunction> fn) {
  auto* h = new submatch_instance{fn, BipartiteInstance(fn)};
  return h;
}

std::vector<double> dense_uncounted(const CostFunction& fn) {
  const std::size_t n = fn.size();
  if (n > baseline::kMaxBaselineN) fail(ErrorCode::Capacity, "exact baseline is limited to n <= 2000");
  std::vector<double> out(n * n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) out[u * n + v] = fn.at(u, v);
  return out;
}

}  // namespace

extern "C" {

void submatch_config_default(submatch_config* c) {
  if (c == nullptr) return;
  c->alpha = 0.85;
  c->beta = 1.0;
  c->gamma = 0.03;
  c->xi_pad = 0.075;
  c->backend = SUBMATCH_BACKEND_EXACT;
  c->seed = 0;
  c->epsilon = 0.3;
  c->params = SUBMATCH_PARAMS_PRACTICAL;
  c->T = 6;
  c->k = 5;
  c->levels = 0;
  c->unit = 0;
  c->max_forest_rounds = 0;
  c->record_timings = 0;
}

const char* submatch_version(void) { return "0.1.0"; }

const char* submatch_last_error(void) { return g_last_error.c_str(); }

submatch_status submatch_instance_from_matrix(size_t n, const double* row_major, submatch_instance** out) {
  return guard([&] {
    need(row_major, "matrix");
    need(out, "output");
    require(n >= 1, "n must be >= 1");
    std::vector<double> data(row_major, row_major + n * n);
    *out = wrap(std::make_shared<DenseCostMatrix>(n, std::move(data)));
  });
}

submatch_status submatch_instance_generate(const char* generator, size_t n, uint64_t seed, size_t dim,
                                           double p, submatch_instance** out) {
  return guard([&] {
    need(generator, "generator");
    need(out, "output");
    GeneratorSpec spec;
    spec.name = generator;
    require(spec.name != "file", "use submatch_instance_load for files");
    spec.n = n;
    spec.seed = seed;
    spec.dim = dim;
    spec.p = p;
    *out = wrap(make_cost_function(spec));
  });
}

submatch_status submatch_instance_load(const char* path, submatch_instance** out) {
  return guard([&] {
    need(path, "path");
    need(out, "output");
    CostMatrixData d = read_cost_matrix(std::string(path));
    *out = wrap(std::make_shared<DenseCostMatrix>(d.n, std::move(d.costs)));
  });
}

submatch_status submatch_instance_save(const submatch_instance* h, const char* path, int binary) {
  return guard([&] {
    need(h, "instance");
    need(path, "path");
    write_cost_matrix(path, *h->fn, binary != 0);
  });
}

size_t submatch_instance_size(const submatch_instance* h) { return h ? h->instance.size() : 0; }

submatch_status submatch_instance_cost(const submatch_instance* h, size_t u, size_t v, double* out) {
  return guard([&] {
    need(h, "instance");
    need(out, "output");
    if (u >= h->instance.size() || v >= h->instance.size()) fail(ErrorCode::OutOfRange, "vertex out of range");
    *out = h->instance.cost(u, v);
  });
}

uint64_t submatch_instance_queries(const submatch_instance* h) { return h ? h->instance.query_count() : 0; }

void submatch_instance_reset_queries(submatch_instance* h) {
  if (h) h->instance.reset_query_count();
}

submatch_status submatch_instance_points(const submatch_instance* h, int side, double* out, size_t cap,
                                         size_t* count, size_t* dim) {
  return guard([&] {
    need(h, "instance");
    auto* e = dynamic_cast<const EuclideanCosts*>(h->fn.get());
    if (e == nullptr) fail(ErrorCode::InvalidArgument, "instance has no points");
    require(side == 0 || side == 1, "side must be 0 or 1");
    const auto& pts = side == 0 ? e->left_points() : e->right_points();
    if (count) *count = pts.size();
    if (dim) *dim = e->dim();
    if (out)
      for (std::size_t i = 0; i < pts.size() && i < cap; ++i) out[i] = pts[i];
  });
}

void submatch_instance_free(submatch_instance* h) { delete h; }

submatch_status submatch_estimate_mwm(submatch_instance* h, const submatch_config* config,
                                      submatch_result** out) {
  return guard([&] {
    need(h, "instance");
    need(config, "config");
    need(out, "output");
    auto r = std::make_unique<submatch_result>();
    r->mwm = estimate_min_weight_matching(h->instance, reduction_of(*config), backend_of(*config),
                                          options_of(*config));
    r->json = report_to_json(r->mwm.report, config->record_timings != 0);
    *out = r.release();
  });
}

double submatch_result_estimate(const submatch_result* r) { return r ? r->mwm.estimate : std::nan(""); }

submatch_status submatch_result_mate(const submatch_result* r, size_t u, int64_t* out) {
  return guard([&] {
    need(r, "result");
    need(out, "output");
    const MatchingOracle& m = *r->mwm.matching;
    if (u >= m.n()) fail(ErrorCode::OutOfRange, "vertex out of range");
    Mate v = m.mate(Vertex::left(static_cast<std::uint32_t>(u)));
    *out = v ? static_cast<int64_t>(v->index()) : -1;
  });
}

size_t submatch_result_size(const submatch_result* r) { return r && r->mwm.matching ? r->mwm.matching->n() : 0; }

const char* submatch_result_json(const submatch_result* r) { return r ? r->json.c_str() : ""; }

void submatch_result_free(submatch_result* r) { delete r; }

submatch_status submatch_knapsack(submatch_instance* h, double budget, const submatch_config* config,
                                  double* size_out, double* xi_out) {
  return guard([&] {
    need(h, "instance");
    need(config, "config");
    KnapsackResult k = max_matching_under_budget(h->instance, budget, config->gamma, backend_of(*config),
                                                 options_of(*config));
    if (size_out) *size_out = k.size_estimate;
    if (xi_out) *xi_out = k.xi;
  });
}

submatch_status submatch_metric_from_matrix(size_t k, const double* row_major, submatch_metric** out) {
  return guard([&] {
    need(row_major, "matrix");
    need(out, "output");
    std::vector<double> d(row_major, row_major + k * k);
    *out = new submatch_metric{std::make_shared<MetricTable>(k, std::move(d))};
  });
}

submatch_status submatch_metric_load(const char* path, submatch_metric** out) {
  return guard([&] {
    need(path, "path");
    need(out, "output");
    *out = new submatch_metric{MetricTable::load(path)};
  });
}

void submatch_metric_free(submatch_metric* m) { delete m; }

submatch_status submatch_distribution_discrete(const submatch_metric* metric, size_t count,
                                               const uint32_t* points, const double* masses,
                                               submatch_distribution** out) {
  return guard([&] {
    need(metric, "metric");
    need(points, "points");
    need(masses, "masses");
    need(out, "output");
    std::vector<std::uint32_t> p(points, points + count);
    std::vector<double> m(masses, masses + count);
    *out = new submatch_distribution{std::make_unique<DiscreteDistribution>(metric->table, p, m)};
  });
}

submatch_status submatch_distribution_stream(const submatch_metric* metric, const char* path,
                                             size_t support_bound, submatch_distribution** out) {
  return guard([&] {
    need(metric, "metric");
    need(path, "path");
    need(out, "output");
    *out = new submatch_distribution{std::make_unique<StreamDistribution>(metric->table, path, support_bound)};
  });
}

uint64_t submatch_distribution_draws(const submatch_distribution* d) { return d ? d->source->draws() : 0; }

void submatch_distribution_free(submatch_distribution* d) { delete d; }

submatch_status submatch_estimate_emd(submatch_distribution* mu, submatch_distribution* nu, size_t n,
                                      const submatch_config* config, double* estimate_out,
                                      uint64_t* draws_out, submatch_result** result_out) {
  return guard([&] {
    need(mu, "mu");
    need(nu, "nu");
    need(config, "config");
    EmdEstimate e = estimate_emd(*mu->source, *nu->source, n, config->gamma, backend_of(*config),
                                 options_of(*config));
    if (estimate_out) *estimate_out = e.estimate;
    if (draws_out) *draws_out = e.draws;
    if (result_out) {
      auto r = std::make_unique<submatch_result>();
      r->json = report_to_json(e.mwm.report, config->record_timings != 0);
      r->mwm = std::move(e.mwm);
      *result_out = r.release();
    }
  });
}

uint64_t submatch_sample_complexity(size_t n) { return n == 0 ? 0 : sample_complexity(n); }

submatch_status submatch_exact_k_matching(const submatch_instance* h, size_t k, double* value_out) {
  return guard([&] {
    need(h, "instance");
    need(value_out, "output");
    std::vector<double> d = dense_uncounted(*h->fn);
    *value_out = baseline::exact_min_weight_k_matching(d, h->fn->size(), k).value;
  });
}

submatch_status submatch_exact_costs_by_size(const submatch_instance* h, double* out, size_t cap,
                                             size_t* count) {
  return guard([&] {
    need(h, "instance");
    std::vector<double> d = dense_uncounted(*h->fn);
    std::vector<double> by = baseline::min_cost_by_size(d, h->fn->size());
    if (count) *count = by.size();
    if (out)
      for (std::size_t i = 0; i < by.size() && i < cap; ++i) out[i] = by[i];
  });
}

submatch_status submatch_exact_emd(const double* mu, size_t k_mu, const double* nu, size_t k_nu,
                                   const double* metric, double* out) {
  return guard([&] {
    need(mu, "mu");
    need(nu, "nu");
    need(metric, "metric");
    need(out, "output");
    *out = baseline::exact_emd(std::vector<double>(mu, mu + k_mu), std::vector<double>(nu, nu + k_nu),
                               std::vector<double>(metric, metric + k_mu * k_nu));
  });
}

}  // extern "C"
