#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "submatch/baseline.hpp"
#include "submatch/error.hpp"
#include "submatch/rng.hpp"
#include "submatch/template.hpp"

using namespace submatch;
using namespace testing;

namespace {

// Implicit costs for instances too large to tabulate.
class FunctionCosts final : public IntegerCosts {
 public:
  FunctionCosts(std::size_t n, IntCost max, std::function<IntCost(std::size_t, std::size_t)> fn)
      : n_(n), max_(max), fn_(std::move(fn)) {}
  std::size_t size() const override { return n_; }
  IntCost at(std::size_t u, std::size_t v) const override { return fn_(u, v); }
  IntCost max_cost() const override { return max_; }

 private:
  std::size_t n_;
  IntCost max_;
  std::function<IntCost(std::size_t, std::size_t)> fn_;
};

std::shared_ptr<TableCosts> random_table(std::size_t n, IntCost max, double absent, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<IntCost> d(n * n);
  for (auto& x : d)
    x = uniform01(rng) < absent ? kAbsent : 1 + static_cast<IntCost>(uniform_below(rng, max));
  return table(n, std::move(d));
}

MatchingEngine exact_engine() { return MatchingEngine(Backend{BackendKind::Exact, 1, 0.3}); }

}  // namespace

TEST_CASE("paper parameters") {
  auto p = TemplateParams::paper(0.5, 1);
  CHECK(p.mode == ParameterMode::Paper);
  CHECK(p.T == 8);
  CHECK(p.delta == doctest::Approx(0.0625));
  CHECK(p.cost_scale == 2);
  CHECK(p.k == std::numeric_limits<std::int64_t>::max());
  CHECK(p.xi == std::numeric_limits<double>::min());
  CHECK(p.range_bound() == 17);
  CHECK(paper_log10_k(0.5, 1) == doctest::Approx(22.103240377446));
  CHECK_NOTHROW(p.validate());
  CHECK(TemplateParams::paper(0.1, 3).cost_scale == 10);
  CHECK_THROWS_AS(TemplateParams::paper(0.0, 1), Error);
  CHECK_THROWS_AS(TemplateParams::paper(0.5, 0), Error);
}

TEST_CASE("practical parameters") {
  auto p = TemplateParams::practical(0.12, 5, 6, 5);
  CHECK(p.xi == doctest::Approx(0.02));
  CHECK(p.delta == doctest::Approx(0.02));
  CHECK(p.cost_scale == 1);
  CHECK(p.range_bound() == 13);
  CHECK_THROWS_AS(TemplateParams::practical(0.1, 5, 6, 2), Error);
  CHECK_THROWS_AS(TemplateParams::practical(0.1, 5, 0, 5), Error);
  CHECK_THROWS_AS(TemplateParams::practical(1.0, 5, 6, 5), Error);
}

TEST_CASE("thresholded matching hides edges at or above w") {
  auto c = table(2, {2, 9, 9, 3});
  auto m = matching(2, {{0, 0}, {1, 1}});
  ThresholdedMatching t(m, c, 3.0, 0.5);
  CHECK(t.mate(Vertex::left(0)) == Vertex::right(0));
  CHECK(t.mate(Vertex::right(0)) == Vertex::left(0));
  CHECK_FALSE(t.mate(Vertex::left(1)));
  CHECK_FALSE(t.mate(Vertex::right(1)));
  CHECK(t.threshold() == 3.0);
  CHECK(t.alpha_w() == 0.5);
  CHECK(checked_size(t) == 1);
}

TEST_CASE("step potentials and forest memberships") {
  auto c = table(2, {3, 5, 5, 5});
  auto phi = potential({2, 1}, {2, 0});
  // (0,0) is matched with phi sum c + 1, so R0 drops by one; (1,1) is matched but not tight.
  auto m = matching(2, {{0, 0}, {1, 1}});
  Step1Potential s1(phi, m, c);
  CHECK(s1.eval(Vertex::left(0)) == 2);
  CHECK(s1.eval(Vertex::right(0)) == 1);
  CHECK(s1.eval(Vertex::right(1)) == 0);
  CHECK(s1.range_bound() == phi->range_bound());

  auto forest = std::make_shared<ExplicitMembership>(std::vector<bool>{true, false},
                                                     std::vector<bool>{false, true});
  Step2Potential s2(phi, forest);
  CHECK(s2.eval(Vertex::left(0)) == 3);
  CHECK(s2.eval(Vertex::left(1)) == 1);
  CHECK(s2.eval(Vertex::right(0)) == 2);
  CHECK(s2.eval(Vertex::right(1)) == -1);

  ForestFrontier frontier(forest);
  CHECK(frontier.contains(Vertex::left(0)));
  CHECK_FALSE(frontier.contains(Vertex::left(1)));
  CHECK(frontier.contains(Vertex::right(0)));
  CHECK_FALSE(frontier.contains(Vertex::right(1)));

  auto half = matching(2, {{1, 0}});
  FreeLeftMembership free_left(half);
  CHECK(free_left.contains(Vertex::left(0)));
  CHECK_FALSE(free_left.contains(Vertex::left(1)));
  CHECK_FALSE(free_left.contains(Vertex::right(1)));

  MateClosure closure(forest, half);
  CHECK(closure.contains(Vertex::left(0)));
  CHECK(closure.contains(Vertex::right(1)));
  CHECK_FALSE(closure.contains(Vertex::right(0)));
  CHECK_FALSE(closure.contains(Vertex::left(1)));
}

TEST_CASE("step1 augments until no eligible path remains") {
  auto engine = exact_engine();
  auto c = constant_table(3, 1);
  auto params = TemplateParams::practical(0.1, 1, 4, 3);
  auto phi = potential({2, 2, 2}, {0, 0, 0}, params.range_bound());
  auto r = step1(phi, std::make_shared<EmptyMatching>(3), params, c, engine);
  CHECK(r.rounds >= 1);
  CHECK(checked_size(*r.matching) == 3);
  for (std::uint32_t v = 0; v < 3; ++v) CHECK(r.potential->eval(Vertex::right(v)) == -1);
  // No eligible edge: the input is returned unchanged.
  auto flat = potential({0, 0, 0}, {0, 0, 0}, params.range_bound());
  auto none = step1(flat, std::make_shared<EmptyMatching>(3), params, c, engine);
  CHECK(none.rounds == 0);
  CHECK(none.potential == flat);
}

TEST_CASE("step2 grows the forest along forward edges") {
  auto engine = exact_engine();
  // L0 free; L1 - R0 matched. Forward edge L0 - R0 has phi(L0) + phi(R0) = c + 1.
  auto c = table(2, {1, kAbsent, 1, kAbsent});
  auto params = TemplateParams::practical(0.1, 1, 4, 3);
  auto phi = potential({2, 1}, {0, 0}, params.range_bound());
  auto m = matching(2, {{1, 0}});
  TemplateOptions opts;
  opts.desk_checks = true;
  auto r = step2(phi, m, params, c, engine, opts);
  CHECK(r.rounds == 1);
  CHECK(r.forest->contains(Vertex::left(0)));
  CHECK(r.forest->contains(Vertex::right(0)));
  CHECK(r.forest->contains(Vertex::left(1)));
  CHECK_FALSE(r.forest->contains(Vertex::right(1)));
  CHECK(r.forest_size == 3);
  CHECK(r.max_depth == 2);
  CHECK(r.max_component == 3);
  CHECK(r.escaping_vc == 0);
  CHECK(r.potential->eval(Vertex::left(0)) == 3);
  CHECK(r.potential->eval(Vertex::right(0)) == -1);
  CHECK(r.potential->eval(Vertex::left(1)) == 2);
  CHECK(r.potential->eval(Vertex::right(1)) == 0);
  params.max_forest_rounds = 1;
  auto capped = step2(phi, m, params, c, engine);
  CHECK(capped.rounds == 1);
}

TEST_CASE("estimator sample size") {
  CHECK(estimator_sample_size(0.1, 1, 100) == 22105);
  CHECK(estimator_sample_size(0.3, 1, 10000) == 4913);
  CHECK(estimator_sample_size(0.1, 1, 1) == 0);
}

TEST_CASE("estimator in census mode discards the top 3 gamma fraction") {
  std::vector<IntCost> d(100, kAbsent);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t i = 0; i < 10; ++i) {
    d[i * 10 + i] = i + 1;
    pairs.emplace_back(i, i);
  }
  auto c = table(10, d);
  auto r = sample_and_estimate(*matching(10, pairs), 0.1, 10, 10, 0, *c);
  CHECK(r.census);
  CHECK(r.sample_size == 10);
  CHECK(r.estimate == doctest::Approx(28.0));
  CHECK(r.w == 8.0);
  CHECK(r.alpha_w == doctest::Approx(0.3));
  CHECK_THROWS_AS(sample_and_estimate(EmptyMatching(10), 0.1, 10, 10, 0, *c), Error);
}

TEST_CASE("estimator in sampling mode") {
  const std::size_t n = 10000;
  FunctionCosts c(n, 1, [](std::size_t, std::size_t) { return IntCost{1}; });
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t i = 0; i < n; i += 2) pairs.emplace_back(i, i);
  auto r = sample_and_estimate(*matching(n, pairs), 0.3, 1, n, 5, c);
  CHECK_FALSE(r.census);
  CHECK(r.sample_size == 4913);
  CHECK(r.estimate == doctest::Approx(10000.0 / 4913 * (4913 - 4422)));
  CHECK(r.w == 1.0);
  CHECK(r.alpha_w == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("run_template on all-ones costs reaches a perfect matching") {
  auto engine = exact_engine();
  auto c = constant_table(20, 1);
  auto params = TemplateParams::practical(0.1, 1, 4, 3);
  TemplateOptions opts;
  opts.desk_checks = true;
  auto r = run_template(c, params, engine, 7, opts);
  CHECK_FALSE(r.exact_fallback);
  CHECK(r.trace.size() == 4);
  CHECK(checked_size(*r.final_state.matching) == 20);
  CHECK(r.sample.census);
  CHECK(r.estimate == doctest::Approx(14.0));
  CHECK(r.slack.free_left == 0);
  CHECK(r.slack.spurious == 0);
  CHECK(r.slack.broken_vc == 0);
  CHECK(r.slack.lemma41_violations == 0);
  CHECK(r.slack.gamma_prime == doctest::Approx(0.1));
}

TEST_CASE("run_template falls back to the exact solver below 1/gamma vertices") {
  auto engine = exact_engine();
  auto c = table(3, {1, 2, 3, 2, 3, 1, 3, 1, 2});
  auto r = run_template(c, TemplateParams::practical(0.25, 3, 4, 3), engine, 0);
  CHECK(r.exact_fallback);
  CHECK(r.estimate == doctest::Approx(3.0));
  CHECK(checked_size(*r.final_state.matching) == 3);
  // Out-of-range costs are rejected.
  CHECK_THROWS_AS(run_template(c, TemplateParams::practical(0.25, 2, 4, 3), engine, 0), Error);
}

TEST_CASE("template invariants on random integer costs") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto engine = exact_engine();
    auto c = random_table(30, 5, seed % 2 ? 0.3 : 0.0, seed);
    auto params = TemplateParams::practical(0.1, 5, 6, 5);
    TemplateOptions opts;
    opts.desk_checks = true;
    auto r = run_template(c, params, engine, seed, opts);
    REQUIRE(r.trace.size() == 6);
    for (const auto& rec : r.trace) {
      CHECK(rec.broken_vc == 0);
      CHECK(rec.escaping_vc == 0);
      CHECK(rec.lemma41_violations == 0);
      CHECK(rec.spurious == 0);
      CHECK(rec.phi_max <= rec.t);
      CHECK(rec.phi_min >= -rec.t);
    }
    CHECK(matched_pairs(*r.thresholded).size() <= matched_pairs(*r.final_state.matching).size());
    // Matched edges of a 1-feasible matching cost at most phi(u) + phi(v) <= 2T.
    for (auto [u, v] : matched_pairs(*r.final_state.matching)) CHECK(c->at(u, v) <= 2 * params.T);
  }
}
