#include "submatch/template.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "submatch/baseline.hpp"
#include "submatch/eligibility.hpp"
#include "submatch/error.hpp"
#include "submatch/rng.hpp"

namespace submatch {
namespace {

// Rejects present costs outside [1, C] at the first read that sees one.
class BoundCheckedCosts final : public IntegerCosts {
 public:
  BoundCheckedCosts(std::shared_ptr<const IntegerCosts> base, IntCost C)
      : base_(std::move(base)), C_(C) {}
  std::size_t size() const override { return base_->size(); }
  IntCost max_cost() const override { return C_; }
  IntCost at(std::size_t u, std::size_t v) const override {
    IntCost c = base_->at(u, v);
    if (c != kAbsent && (c < 1 || c > C_))
      fail(ErrorCode::MalformedCost, "cost c(" + std::to_string(u) + "," + std::to_string(v) +
                                         ") = " + std::to_string(c) + " lies outside [1, C]");
    return c;
  }

 private:
  std::shared_ptr<const IntegerCosts> base_;
  IntCost C_;
};

std::vector<double> dense_costs(const IntegerCosts& c) {
  const std::size_t n = c.size();
  std::vector<double> out(n * n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      IntCost x = c.at(u, v);
      out[u * n + v] = x == kAbsent ? baseline::kNonEdge : static_cast<double>(x);
    }
  return out;
}

}  // namespace

TemplateParams TemplateParams::paper(double gamma, IntCost C) {
  require(gamma > 0 && gamma < 1, "gamma must be in (0, 1)");
  require(C >= 1, "C must be >= 1");
  TemplateParams p;
  p.mode = ParameterMode::Paper;
  p.gamma = gamma;
  p.C = C;
  double t = std::ceil(static_cast<double>(C) / (gamma * gamma * gamma));
  require(t < 1e15, "paper-mode T overflows");
  p.T = static_cast<std::int64_t>(t);
  p.delta = gamma / static_cast<double>(p.T);
  double log10k = paper_log10_k(gamma, C);
  p.k = log10k >= 18.9 ? std::numeric_limits<std::int64_t>::max()
                       : static_cast<std::int64_t>(std::ceil(std::pow(10.0, log10k)));
  // xi = gamma / (T k 2^k), evaluated in log space.
  double log2xi = std::log2(gamma) - std::log2(static_cast<double>(p.T)) -
                  log10k / std::log10(2.0) - std::pow(10.0, std::min(log10k, 300.0));
  p.xi = std::max(std::exp2(log2xi), std::numeric_limits<double>::min());
  p.cost_scale = static_cast<IntCost>(std::ceil(1.0 / gamma - 1e-9));
  p.max_forest_rounds = 0;
  return p;
}

double paper_log10_k(double gamma, IntCost C) {
  double t = std::ceil(static_cast<double>(C) / (gamma * gamma * gamma));
  double delta = gamma / t;
  return std::log10(6000.0) + 10 * std::log10(2 * t + 1) - 5 * std::log10(delta);
}

TemplateParams TemplateParams::practical(double gamma, IntCost C, std::int64_t T, std::int64_t k) {
  TemplateParams p;
  p.mode = ParameterMode::Practical;
  p.gamma = gamma;
  p.C = C;
  p.T = T;
  p.k = k;
  p.xi = gamma / static_cast<double>(T);
  p.delta = gamma / static_cast<double>(T);
  p.cost_scale = 1;
  p.validate();
  return p;
}

void TemplateParams::validate() const {
  require(gamma > 0 && gamma < 1, "gamma must be in (0, 1)");
  require(C >= 1, "C must be >= 1");
  require(T >= 1, "T must be >= 1");
  require(xi > 0 && xi < 1, "xi must be in (0, 1)");
  require(delta > 0 && delta < 1, "delta must be in (0, 1)");
  require(cost_scale >= 1, "cost scale must be >= 1");
  require(max_forest_rounds >= 0, "forest round cap must be >= 0");
  require(epsilon > 0 && epsilon < 1, "epsilon must be in (0, 1)");
  if (mode == ParameterMode::Practical) require(k >= 3, "practical k must be >= 3");
}

ThresholdedMatching::ThresholdedMatching(MatchingPtr base, std::shared_ptr<const IntegerCosts> costs,
                                         double w, double alpha_w)
    : MatchingOracle(base ? base->n() : 0), base_(std::move(base)), costs_(std::move(costs)),
      w_(w), alpha_w_(alpha_w), cache_(n()) {
  require(base_ != nullptr && costs_ != nullptr, "null argument");
}

Mate ThresholdedMatching::mate(Vertex v) const {
  if (auto hit = cache_.get(v)) return *hit;
  Mate m = base_->mate(v);
  if (m && !(static_cast<double>((*costs_)(v, *m)) < w_)) m.reset();
  cache_.put(v, m);
  return m;
}

Step1Potential::Step1Potential(PotentialPtr phi_in, MatchingPtr m_out,
                               std::shared_ptr<const IntegerCosts> c)
    : PotentialOracle(phi_in->n(), phi_in->range_bound()), phi_in_(std::move(phi_in)),
      m_out_(std::move(m_out)), c_(std::move(c)) {}

std::int64_t Step1Potential::compute(Vertex v) const {
  std::int64_t p = phi_in_->eval(v);
  if (v.is_left()) return p;
  Mate u = m_out_->mate(v);
  if (!u) return p;
  IntCost cost = (*c_)(*u, v);
  if (cost != kAbsent && cost + 1 == phi_in_->eval(*u) + p) return p - 1;
  return p;
}

Step2Potential::Step2Potential(PotentialPtr phi_in, MembershipPtr forest)
    : PotentialOracle(phi_in->n(), phi_in->range_bound()), phi_in_(std::move(phi_in)),
      forest_(std::move(forest)) {}

std::int64_t Step2Potential::compute(Vertex v) const {
  std::int64_t p = phi_in_->eval(v);
  if (!forest_->contains(v)) return p;
  return v.is_left() ? p + 1 : p - 1;
}

FreeLeftMembership::FreeLeftMembership(MatchingPtr m) : MembershipOracle(m->n()), m_(std::move(m)) {}

MateClosure::MateClosure(MembershipPtr base, MatchingPtr m)
    : MembershipOracle(base->n()), base_(std::move(base)), m_(std::move(m)) {}

bool MateClosure::compute(Vertex v) const {
  if (base_->contains(v)) return true;
  Mate w = m_->mate(v);
  return w && base_->contains(*w);
}

ForestFrontier::ForestFrontier(MembershipPtr forest)
    : MembershipOracle(forest->n()), forest_(std::move(forest)) {}

Step1Result step1(const PotentialPtr& phi_in, const MatchingPtr& m_in, const TemplateParams& params,
                  const std::shared_ptr<const IntegerCosts>& c, MatchingEngine& engine) {
  Step1Result r;
  MatchingPtr m = m_in;
  for (;;) {
    MatchingPtr next = engine.augment_eligible(*phi_in, m, params.k, params.xi, params.epsilon, *c);
    if (!next) break;
    r.paths += static_cast<const AugmentedMatching&>(*next).path_count();
    m = std::move(next);
    ++r.rounds;
  }
  r.matching = m;
  r.potential = r.rounds == 0 ? phi_in : std::make_shared<Step1Potential>(phi_in, m, c);
  return r;
}

Step2Result step2(const PotentialPtr& phi_in, const MatchingPtr& m_in, const TemplateParams& params,
                  const std::shared_ptr<const IntegerCosts>& c, MatchingEngine& engine,
                  const TemplateOptions& options) {
  const std::size_t n = m_in->n();
  Step2Result r;
  MembershipPtr forest = std::make_shared<FreeLeftMembership>(m_in);

  // Forest shape bookkeeping, indexed by vertex code.
  constexpr std::size_t kOut = SIZE_MAX;
  std::vector<std::size_t> depth, root;
  if (options.diagnostics) {
    depth.assign(2 * n, kOut);
    root.assign(2 * n, kOut);
    for (std::uint32_t u = 0; u < n; ++u)
      if (!m_in->mate(Vertex::left(u))) {
        depth[Vertex::left(u).code()] = 0;
        root[Vertex::left(u).code()] = u;
      }
  }
  for (;;) {
    if (params.max_forest_rounds > 0 && static_cast<std::int64_t>(r.rounds) >= params.max_forest_rounds)
      break;
    auto frontier = std::make_shared<ForestFrontier>(forest);
    MatchingPtr mt = engine.large_matching_forward(*phi_in, *frontier, params.delta, params.epsilon,
                                                   *m_in, *c);
    if (!mt) break;
    ++r.rounds;
    auto grown = std::make_shared<MateClosure>(forest, mt);
    forest = std::make_shared<MateClosure>(grown, m_in);
    if (options.diagnostics) {
      for (auto [u, v] : matched_pairs(*mt)) {
        std::size_t cu = Vertex::left(u).code(), cv = Vertex::right(v).code();
        depth[cv] = depth[cu] + 1;
        root[cv] = root[cu];
        if (Mate w = m_in->mate(Vertex::right(v))) {
          depth[w->code()] = depth[cv] + 1;
          root[w->code()] = root[cu];
        }
      }
    }
  }
  r.forest = forest;
  r.potential = std::make_shared<Step2Potential>(phi_in, forest);
  if (options.diagnostics) {
    std::vector<std::size_t> comp(n, 0);
    for (std::size_t x = 0; x < 2 * n; ++x) {
      if (depth[x] == kOut) continue;
      ++r.forest_size;
      r.max_depth = std::max(r.max_depth, depth[x]);
      r.max_component = std::max(r.max_component, ++comp[root[x]]);
    }
  }
  if (options.desk_checks) {
    EligibilityView view(*c, *phi_in, *m_in);
    std::vector<baseline::Edge> escaping;
    for (std::uint32_t u = 0; u < n; ++u) {
      if (!forest->contains(Vertex::left(u))) continue;
      for (std::uint32_t v = 0; v < n; ++v)
        if (!forest->contains(Vertex::right(v)) && view.eligible_nonmatched(u, v))
          escaping.emplace_back(u, v);
    }
    r.escaping_vc = static_cast<std::int64_t>(baseline::max_matching_size(n, escaping));
  }
  return r;
}

std::size_t estimator_sample_size(double gamma, IntCost C, std::size_t n) {
  if (n < 2) return 0;
  double s = std::ceil(48.0 * std::pow(static_cast<double>(C) / gamma, 2) * std::log(static_cast<double>(n)));
  return s >= 1e18 ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(s);
}

SampleEstimate sample_and_estimate(const MatchingOracle& m, double gamma, IntCost C, std::size_t n,
                                   std::uint64_t seed, const IntegerCosts& c) {
  require(gamma > 0 && gamma < 1, "gamma must be in (0, 1)");
  require(n == m.n(), "matching size mismatch");
  SampleEstimate r;
  const std::size_t prescribed = estimator_sample_size(gamma, C, n);
  std::vector<std::pair<double, std::size_t>> samples;  // (cost, sample index)
  double matched_fraction = 0;
  if (prescribed >= n) {
    r.census = true;
    for (std::uint32_t u = 0; u < n; ++u)
      if (Mate v = m.mate(Vertex::left(u)))
        samples.emplace_back(static_cast<double>(c(Vertex::left(u), *v)), samples.size());
    matched_fraction = static_cast<double>(samples.size()) / static_cast<double>(n);
  } else {
    Rng rng(derive_seed(seed, "estimator"));
    const std::size_t max_draws = prescribed * 64 + 1024;
    std::size_t draws = 0;
    while (samples.size() < prescribed && draws < max_draws) {
      ++draws;
      Vertex u = Vertex::left(static_cast<std::uint32_t>(uniform_below(rng, n)));
      if (Mate v = m.mate(u)) samples.emplace_back(static_cast<double>(c(u, *v)), samples.size());
    }
    matched_fraction = static_cast<double>(samples.size()) / static_cast<double>(draws);
  }
  if (samples.empty()) fail(ErrorCode::InvalidArgument, "cannot estimate from an empty matching");
  const std::size_t s = samples.size();
  std::sort(samples.begin(), samples.end());
  const auto discard = std::min(s, static_cast<std::size_t>(std::ceil(3.0 * gamma * static_cast<double>(s) - 1e-9)));
  double kept = 0;
  for (std::size_t i = 0; i + discard < s; ++i) kept += samples[i].first;
  r.sample_size = s;
  r.estimate = static_cast<double>(n) / static_cast<double>(s) * kept;
  r.w = discard == 0 ? std::numeric_limits<double>::infinity() : samples[s - discard].first;
  std::size_t at_or_above = 0;
  for (const auto& x : samples) at_or_above += x.first >= r.w;
  r.alpha_w = matched_fraction * static_cast<double>(at_or_above) / static_cast<double>(s);
  return r;
}

std::size_t broken_vertex_cover(const PotentialOracle& phi, const MatchingOracle& m,
                                const IntegerCosts& c) {
  const std::size_t n = m.n();
  std::vector<baseline::Edge> bad;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = 0; v < n; ++v)
      if (!is_one_feasible(Vertex::left(u), Vertex::right(v), phi, m, c)) bad.emplace_back(u, v);
  return baseline::max_matching_size(n, bad);
}

TemplateResult run_template(std::shared_ptr<const IntegerCosts> costs, const TemplateParams& params,
                            MatchingEngine& engine, std::uint64_t seed,
                            const TemplateOptions& options) {
  require(costs != nullptr, "null costs");
  params.validate();
  const std::size_t n = costs->size();
  TemplateResult result;
  std::shared_ptr<const IntegerCosts> checked = std::make_shared<BoundCheckedCosts>(costs, params.C);
  std::shared_ptr<const IntegerCosts> c =
      params.cost_scale > 1 ? std::make_shared<ScaledCosts>(checked, params.cost_scale) : checked;
  result.scaled_costs = c;
  const double scale = static_cast<double>(params.cost_scale);

  if (static_cast<double>(n) < 1.0 / params.gamma) {
    // Too small for the iterative machinery: solve exactly.
    std::vector<double> dense = dense_costs(*c);
    auto by_size = baseline::min_cost_by_size(dense, n);
    auto exact = baseline::exact_min_weight_k_matching(dense, n, by_size.size() - 1);
    MatchingPtr m = std::make_shared<ExplicitMatching>(n, exact.witness);
    result.exact_fallback = true;
    result.estimate = exact.value / scale;
    result.thresholded = std::make_shared<ThresholdedMatching>(
        m, c, std::numeric_limits<double>::infinity(), 0.0);
    result.final_state = {0, m, std::make_shared<ZeroPotential>(n, params.range_bound())};
    result.slack.gamma_prime = params.gamma;
    return result;
  }

  IterationState state{0, std::make_shared<EmptyMatching>(n),
                       std::make_shared<ZeroPotential>(n, params.range_bound())};
  double max_escaping = 0;
  for (std::int64_t t = 1; t <= params.T; ++t) {
    Step1Result s1 = step1(state.potential, state.matching, params, c, engine);
    Step2Result s2 = step2(s1.potential, s1.matching, params, c, engine, options);
    state = {t, s1.matching, s2.potential};
    IterationRecord rec;
    rec.t = t;
    rec.step1_rounds = s1.rounds;
    rec.step1_paths = s1.paths;
    rec.step2_rounds = s2.rounds;
    rec.forest_size = s2.forest_size;
    rec.forest_depth = s2.max_depth;
    rec.forest_component = s2.max_component;
    rec.escaping_vc = s2.escaping_vc;
    if (s2.escaping_vc >= 0) max_escaping = std::max(max_escaping, static_cast<double>(s2.escaping_vc));
    if (options.diagnostics) {
      rec.phi_min = std::numeric_limits<std::int64_t>::max();
      rec.phi_max = std::numeric_limits<std::int64_t>::min();
      for (std::uint32_t i = 0; i < n; ++i) {
        Vertex u = Vertex::left(i), v = Vertex::right(i);
        std::int64_t pu = state.potential->eval(u), pv = state.potential->eval(v);
        rec.phi_min = std::min({rec.phi_min, pu, pv});
        rec.phi_max = std::max({rec.phi_max, pu, pv});
        if (state.matching->mate(u)) {
          ++rec.matching_size;
        } else {
          ++rec.free_left;
          if (pu != t) ++rec.lemma41_violations;
        }
        if (!state.matching->mate(v) && pv != 0) ++rec.spurious;
      }
      rec.matching_dependencies = matching_dependency_count(*state.potential);
    }
    if (options.desk_checks)
      rec.broken_vc = static_cast<std::int64_t>(broken_vertex_cover(*state.potential, *state.matching, *c));
    if (options.query_counter) rec.queries = options.query_counter();
    result.trace.push_back(rec);
  }
  result.final_state = state;
  if (!result.trace.empty()) {
    const IterationRecord& last = result.trace.back();
    result.slack.spurious = last.spurious;
    result.slack.broken_vc = last.broken_vc;
    result.slack.free_left = last.free_left;
    for (const auto& rec : result.trace) result.slack.lemma41_violations += rec.lemma41_violations;
    const double nn = static_cast<double>(n);
    result.slack.gamma_prime = std::max({params.gamma, static_cast<double>(params.T) * max_escaping / nn,
                                         static_cast<double>(last.free_left) / (4 * nn)});
  }

  bool empty = true;
  for (std::uint32_t u = 0; u < n && empty; ++u) empty = !state.matching->mate(Vertex::left(u));
  if (empty) {
    result.estimate = 0;
    result.thresholded = std::make_shared<ThresholdedMatching>(state.matching, c, 0.0, 0.0);
    return result;
  }
  result.sample = sample_and_estimate(*state.matching, params.gamma, params.C, n, seed, *c);
  result.estimate = result.sample.estimate / scale;
  result.thresholded = std::make_shared<ThresholdedMatching>(state.matching, c, result.sample.w,
                                                             result.sample.alpha_w);
  return result;
}

}  // namespace submatch
