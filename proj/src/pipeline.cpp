#include "submatch/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "submatch/error.hpp"
#include "submatch/rng.hpp"

namespace submatch {
namespace {

std::size_t ceil_tol(double x) { return static_cast<std::size_t>(std::ceil(x - 1e-9)); }

class Stopwatch {
 public:
  double lap_ms() {
    auto now = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

ReductionConfig ReductionConfig::for_window(double alpha, double beta) {
  ReductionConfig c;
  c.alpha = alpha;
  c.beta = beta;
  c.gamma = (beta - alpha) / 5;
  c.xi_pad = (beta - alpha) / 2;
  c.validate();
  return c;
}

void ReductionConfig::validate() const {
  require(alpha >= 0 && alpha < beta && beta <= 1, "need 0 <= alpha < beta <= 1");
  require(gamma > 0 && gamma < 1, "gamma must be in (0, 1)");
  require(xi_pad > 0 && xi_pad <= (beta - alpha) / 2 + 1e-12, "xi_pad must be in (0, (beta - alpha) / 2]");
}

CharacteristicCost find_characteristic_cost(const BipartiteInstance& instance,
                                            const ReductionConfig& config, MatchingEngine& engine,
                                            std::uint64_t seed) {
  config.validate();
  const std::size_t n = instance.size();
  const double nn = static_cast<double>(n);
  CharacteristicCost out;
  auto s = static_cast<std::size_t>(std::ceil(nn * std::log(nn) / config.gamma));
  s = std::max<std::size_t>(s, 1);
  Rng rng(derive_seed(seed, "characteristic"));
  out.ladder.reserve(s);
  for (std::size_t i = 0; i < s; ++i) {
    std::size_t u = uniform_below(rng, n), v = uniform_below(rng, n);
    out.ladder.push_back(instance.cost(u, v));
  }
  std::sort(out.ladder.begin(), out.ladder.end());
  const double bar = (config.beta - 2 * config.gamma) * nn;
  auto small = [&](std::size_t i) {
    const double threshold = config.gamma * out.ladder[i];
    FunctionGraphView g(n, [&](std::uint32_t u, std::uint32_t v) {
      return instance.cost(u, v) <= threshold;
    });
    ++out.probes;
    return static_cast<double>(engine.approx_match(g, config.gamma).size_estimate) < bar;
  };
  // Largest i with small(i); lo is known small (or -1), hi known not small (or s).
  std::ptrdiff_t lo = -1, hi = static_cast<std::ptrdiff_t>(s);
  while (hi - lo > 1) {
    std::ptrdiff_t mid = lo + (hi - lo) / 2;
    if (small(static_cast<std::size_t>(mid)))
      lo = mid;
    else
      hi = mid;
  }
  out.index = lo < 0 ? 0 : static_cast<std::size_t>(lo);
  out.w_bar = out.ladder[out.index];
  return out;
}

std::int64_t to_scaled(double c) {
  require(std::isfinite(c) && c >= 0 && c < 9e9, "cost out of the scaled-integer range");
  return std::llround(c * 1e9);
}

RoundedCosts::RoundedCosts(BipartiteInstance base, double unit, double w, OverThreshold policy)
    : base_(std::move(base)), unit_(unit), policy_(policy),
      clamped_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  require(unit >= 0 && w >= 0, "unit and w must be >= 0");
  w_scaled_ = to_scaled(w);
  if (w_scaled_ == 0) {
    unit_ = 0;
    unit_scaled_ = 1;
    C_ = 2;
    return;
  }
  require(unit > 0, "unit must be positive when w > 0");
  unit_scaled_ = std::max<std::int64_t>(1, to_scaled(unit));
  unit_ = static_cast<double>(unit_scaled_) * 1e-9;
  C_ = round_scaled(w_scaled_) + 1;
}

IntCost RoundedCosts::round_scaled(std::int64_t c_scaled) const {
  return (c_scaled + unit_scaled_ - 1) / unit_scaled_ + 1;
}

IntCost RoundedCosts::at(std::size_t u, std::size_t v) const {
  std::int64_t c = to_scaled(base_.cost(u, v));
  if (c > w_scaled_) {
    if (policy_ == OverThreshold::Remove) return kAbsent;
    clamped_->fetch_add(1, std::memory_order_relaxed);
    c = w_scaled_;
  }
  return round_scaled(c);
}

std::shared_ptr<RoundedCosts> round_costs(const BipartiteInstance& instance, double gamma, double w,
                                          OverThreshold policy) {
  require(gamma > 0 && gamma < 1, "gamma must be in (0, 1)");
  return std::make_shared<RoundedCosts>(instance, gamma * gamma * w / 2, w, policy);
}

Padding padding_for(std::size_t n, double beta, double xi_pad) {
  require(beta > 0 && beta <= 1, "beta must be in (0, 1]");
  require(xi_pad > 0 && xi_pad < 1, "xi_pad must be in (0, 1)");
  Padding p;
  p.n = n;
  p.dummies = std::min(n, std::max<std::size_t>(1, ceil_tol((1 - beta + xi_pad) * static_cast<double>(n))));
  p.n_bar = n + p.dummies;
  p.offset = 2.0 * static_cast<double>(p.dummies) - xi_pad * static_cast<double>(n);
  return p;
}

PaddedCosts::PaddedCosts(std::shared_ptr<const IntegerCosts> inner, Padding padding)
    : inner_(std::move(inner)), padding_(padding) {
  require(inner_ != nullptr && inner_->size() == padding_.n, "padding does not match inner costs");
}

IntCost PaddedCosts::at(std::size_t u, std::size_t v) const {
  const std::size_t n = padding_.n;
  if (u < n && v < n) return inner_->at(u, v);
  if (u >= n && v >= n) return kAbsent;
  return 1;
}

std::shared_ptr<PaddedCosts> pad_dummies(std::shared_ptr<const IntegerCosts> inner, double beta,
                                         double xi_pad) {
  require(inner != nullptr, "null costs");
  Padding p = padding_for(inner->size(), beta, xi_pad);
  return std::make_shared<PaddedCosts>(std::move(inner), p);
}

UnpaddedMatching::UnpaddedMatching(MatchingPtr padded, std::size_t n)
    : MatchingOracle(n), padded_(std::move(padded)) {
  require(padded_ != nullptr && padded_->n() >= n, "bad padded matching");
}

Mate UnpaddedMatching::mate(Vertex v) const {
  require(v.index() < n(), "vertex out of range");
  Mate m = padded_->mate(v);
  if (!m || m->index() >= n()) return std::nullopt;
  return m;
}

MwmEstimate estimate_min_weight_matching(const BipartiteInstance& instance,
                                         const ReductionConfig& config, const Backend& backend,
                                         const PipelineOptions& options) {
  config.validate();
  if (options.mode == ParameterMode::Practical)
    require(options.T >= 2 && options.k >= 3, "practical parameters need T >= 2 and k >= 3");
  const std::size_t n = instance.size();
  MatchingEngine engine(backend);
  Stopwatch clock;
  const std::uint64_t q0 = instance.query_count();
  MwmEstimate out;
  Report& rep = out.report;
  rep.alpha = config.alpha;
  rep.beta = config.beta;
  rep.gamma = config.gamma;
  rep.xi_pad = config.xi_pad;
  rep.backend = to_string(backend.kind);
  rep.seed = backend.seed;
  rep.n = n;
  rep.strict = config.strict();
  rep.params = options.mode == ParameterMode::Paper ? "paper" : "practical";
  if (!rep.strict) rep.degradations.push_back("gamma >= (beta - alpha) / 4");

  out.characteristic = find_characteristic_cost(instance, config, engine, backend.seed);
  const double w_bar = out.characteristic.w_bar;
  rep.w_bar = w_bar;
  rep.stage_timings["characteristic_cost"] = clock.lap_ms();

  double unit = 0;
  if (options.mode == ParameterMode::Paper) {
    unit = config.gamma * config.gamma * w_bar / 2;
  } else if (options.unit > 0) {
    unit = options.unit;
  } else {
    double levels = options.levels > 0 ? options.levels : static_cast<double>(options.T - 1);
    unit = config.gamma * w_bar / levels;
  }
  auto rounded = std::make_shared<RoundedCosts>(instance, unit, w_bar, OverThreshold::Remove);
  auto padded = pad_dummies(rounded, config.beta, config.xi_pad);
  out.rounded = rounded;
  out.padded = padded;
  const Padding& pad = padded->padding();
  rep.n_bar = pad.n_bar;
  rep.call_budget = engine.budget(pad.n_bar);
  rep.unit = rounded->unit();
  rep.C = padded->max_cost();
  rep.stage_timings["round_and_pad"] = clock.lap_ms();

  const double gamma_t = config.xi_pad * static_cast<double>(n) / (2.0 * static_cast<double>(pad.n_bar));
  TemplateParams tp = options.mode == ParameterMode::Paper
                          ? TemplateParams::paper(gamma_t, rep.C)
                          : TemplateParams::practical(gamma_t, rep.C, options.T, options.k);
  tp.max_forest_rounds = options.max_forest_rounds;
  tp.epsilon = std::min(0.2, backend.epsilon);
  rep.T = tp.T;
  rep.k = tp.k == std::numeric_limits<std::int64_t>::max()
              ? "10^" + std::to_string(paper_log10_k(gamma_t, rep.C))
              : std::to_string(tp.k);
  TemplateOptions topt;
  topt.diagnostics = options.diagnostics;
  topt.desk_checks = options.desk_checks;
  topt.query_counter = [&instance, q0] { return instance.query_count() - q0; };
  out.template_result = run_template(padded, tp, engine, derive_seed(backend.seed, "template"), topt);
  rep.stage_timings["template"] = clock.lap_ms();

  const TemplateResult& tr = out.template_result;
  double est = rounded->unit() * pad.unpad_estimate(tr.estimate);
  if (est < 0) {
    rep.degradations.push_back("negative unpadded estimate clamped to 0");
    est = 0;
  }
  out.estimate = est;
  rep.estimate = est;
  out.matching = std::make_shared<UnpaddedMatching>(tr.thresholded, n);
  std::size_t matched = 0;
  for (std::uint32_t u = 0; u < n; ++u) matched += out.matching->mate(Vertex::left(u)).has_value();
  rep.matched_fraction = static_cast<double>(matched) / static_cast<double>(n);
  rep.gamma_prime = tr.slack.gamma_prime;
  rep.free_left = tr.slack.free_left;
  rep.spurious = tr.slack.spurious;
  rep.exact_fallback = tr.exact_fallback;
  rep.stage_timings["unpad"] = clock.lap_ms();

  const EngineStats& st = engine.stats();
  rep.subroutine_calls = st.calls;
  rep.max_call_queries = st.max_call_queries;
  rep.budget_violations = st.budget_violations;
  rep.exhausted_calls = st.exhausted_calls;
  if (st.exhausted_calls > 0)
    rep.degradations.push_back(std::to_string(st.exhausted_calls) + " subroutine calls hit the query cap");
  if (st.budget_violations > 0)
    rep.degradations.push_back(std::to_string(st.budget_violations) + " subroutine calls exceeded the query budget");
  rep.total_queries = instance.query_count() - q0;
  return out;
}

KnapsackResult max_matching_under_budget(const BipartiteInstance& instance, double budget,
                                         double gamma, const Backend& backend,
                                         const PipelineOptions& options) {
  require(budget >= 0, "budget must be >= 0");
  require(gamma > 0 && gamma < 1, "gamma must be in (0, 1)");
  const double step = gamma / 4;
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    double xi = static_cast<double>(i) * step;
    if (xi > 1 - 1e-12) break;
    grid.push_back(xi);
  }
  grid.push_back(1.0);
  KnapsackResult out;
  const std::uint64_t q0 = instance.query_count();
  auto feasible = [&](std::size_t i) {
    const double xi = grid[i];
    ReductionConfig cfg;
    cfg.beta = xi;
    cfg.alpha = std::max(0.0, xi - step);
    cfg.gamma = (cfg.beta - cfg.alpha) / 5;
    cfg.xi_pad = (cfg.beta - cfg.alpha) / 2;
    Backend b = backend;
    b.seed = derive_seed(backend.seed, "knapsack", i);
    MwmEstimate e = estimate_min_weight_matching(instance, cfg, b, options);
    KnapsackEvaluation ev{xi, e.estimate, e.estimate <= budget};
    out.evaluations.push_back(ev);
    return ev.feasible;
  };
  // grid[0] = 0 is always feasible.
  std::size_t lo = 0, hi = grid.size();
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  out.xi = grid[lo];
  out.size_estimate = out.xi * static_cast<double>(instance.size());
  out.total_queries = instance.query_count() - q0;
  return out;
}

}  // namespace submatch
