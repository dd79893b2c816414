#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "submatch/instance.hpp"
#include "submatch/mcm.hpp"
#include "submatch/oracles.hpp"

namespace submatch {

enum class ParameterMode { Paper, Practical };

struct TemplateParams {
  double gamma = 0.1;
  IntCost C = 1;               // input costs lie in [1, C]
  std::int64_t T = 6;          // iterations
  std::int64_t k = 5;          // path length / forest depth bound
  double xi = 0;               // QMSNDAP slack
  double delta = 0;            // QMF slack
  ParameterMode mode = ParameterMode::Practical;
  IntCost cost_scale = 1;      // lazy integer rescale applied to costs, undone on output
  std::int64_t max_forest_rounds = 0;  // 0: grow until LargeMatchingForward returns ⊥
  double epsilon = 0.2;

  // T = ceil(C / gamma^3), xi = gamma / (T k 2^k), delta = gamma / T,
  // k = ceil(6000 (2T+1)^10 / delta^5). k saturates at INT64_MAX and xi may underflow to the
  // smallest positive double; the rescale factor is ceil(1 / gamma).
  static TemplateParams paper(double gamma, IntCost C);
  // xi = delta = gamma / T, no rescale.
  static TemplateParams practical(double gamma, IntCost C, std::int64_t T, std::int64_t k);

  void validate() const;
  std::int64_t range_bound() const { return 2 * T + 1; }
};

// log10 of the paper-mode k, which does not fit any machine integer once T >= 2.
double paper_log10_k(double gamma, IntCost C);

struct IterationState {
  std::int64_t t = 0;
  MatchingPtr matching;
  PotentialPtr potential;
};

// Reports mate(u) only when the base edge cost is below w.
class ThresholdedMatching final : public MatchingOracle {
 public:
  ThresholdedMatching(MatchingPtr base, std::shared_ptr<const IntegerCosts> costs, double w,
                      double alpha_w);
  Mate mate(Vertex v) const override;
  std::string_view kind() const override { return "thresholded-matching"; }
  std::vector<const Oracle*> dependencies() const override { return {base_.get()}; }
  double threshold() const { return w_; }
  double alpha_w() const { return alpha_w_; }
  const MatchingOracle& base() const { return *base_; }

 private:
  MatchingPtr base_;
  std::shared_ptr<const IntegerCosts> costs_;
  double w_;
  double alpha_w_;
  MateCache cache_;
};

// phi_out(u) = phi_in(u) on V0; on V1, phi_in(u) - 1 when u is matched in M_out by an edge
// with phi_in(u) + phi_in(mate) = c + 1, else phi_in(u).
class Step1Potential final : public PotentialOracle {
 public:
  Step1Potential(PotentialPtr phi_in, MatchingPtr m_out, std::shared_ptr<const IntegerCosts> c);
  std::string_view kind() const override { return "step1-potential"; }
  std::vector<const Oracle*> dependencies() const override { return {phi_in_.get(), m_out_.get()}; }

 protected:
  std::int64_t compute(Vertex v) const override;

 private:
  PotentialPtr phi_in_;
  MatchingPtr m_out_;
  std::shared_ptr<const IntegerCosts> c_;
};

// phi_in + 1 on F ∩ V0, phi_in - 1 on F ∩ V1.
class Step2Potential final : public PotentialOracle {
 public:
  Step2Potential(PotentialPtr phi_in, MembershipPtr forest);
  std::string_view kind() const override { return "step2-potential"; }
  std::vector<const Oracle*> dependencies() const override { return {phi_in_.get(), forest_.get()}; }

 protected:
  std::int64_t compute(Vertex v) const override;

 private:
  PotentialPtr phi_in_;
  MembershipPtr forest_;
};

// Free V0 vertices of a matching.
class FreeLeftMembership final : public MembershipOracle {
 public:
  explicit FreeLeftMembership(MatchingPtr m);
  std::string_view kind() const override { return "free-left"; }
  std::vector<const Oracle*> dependencies() const override { return {m_.get()}; }

 protected:
  bool compute(Vertex v) const override { return v.is_left() && !m_->mate(v); }

 private:
  MatchingPtr m_;
};

// F ∪ mates_M(F).
class MateClosure final : public MembershipOracle {
 public:
  MateClosure(MembershipPtr base, MatchingPtr m);
  std::string_view kind() const override { return "mate-closure"; }
  std::vector<const Oracle*> dependencies() const override { return {base_.get(), m_.get()}; }

 protected:
  bool compute(Vertex v) const override;

 private:
  MembershipPtr base_;
  MatchingPtr m_;
};

// (F ∩ V0) ∪ (V1 \ F).
class ForestFrontier final : public MembershipOracle {
 public:
  explicit ForestFrontier(MembershipPtr forest);
  std::string_view kind() const override { return "forest-frontier"; }
  std::vector<const Oracle*> dependencies() const override { return {forest_.get()}; }

 protected:
  bool compute(Vertex v) const override { return v.is_left() == forest_->contains(v); }

 private:
  MembershipPtr forest_;
};

struct TemplateOptions {
  bool diagnostics = true;   // O(n) per round: forest shape, free and spurious counts
  bool desk_checks = false;  // O(n^2) per iteration: broken vertex cover, escaping edges
  std::function<std::uint64_t()> query_counter;
};

struct Step1Result {
  MatchingPtr matching;
  PotentialPtr potential;
  std::size_t rounds = 0;
  std::size_t paths = 0;
};

struct Step2Result {
  PotentialPtr potential;
  MembershipPtr forest;
  std::size_t rounds = 0;
  std::size_t forest_size = 0;     // diagnostics only
  std::size_t max_depth = 0;       // diagnostics only
  std::size_t max_component = 0;   // diagnostics only
  std::int64_t escaping_vc = -1;   // desk checks only
};

Step1Result step1(const PotentialPtr& phi_in, const MatchingPtr& m_in, const TemplateParams& params,
                  const std::shared_ptr<const IntegerCosts>& c, MatchingEngine& engine);

Step2Result step2(const PotentialPtr& phi_in, const MatchingPtr& m_in, const TemplateParams& params,
                  const std::shared_ptr<const IntegerCosts>& c, MatchingEngine& engine,
                  const TemplateOptions& options = {});

struct SampleEstimate {
  double estimate = 0;
  double w = 0;
  double alpha_w = 0;
  std::size_t sample_size = 0;
  bool census = false;  // prescribed |S| >= n, so every matched edge was read once
};

// |S| = ceil(48 (C / gamma)^2 ln n); when |S| >= n the matching is enumerated instead.
std::size_t estimator_sample_size(double gamma, IntCost C, std::size_t n);

SampleEstimate sample_and_estimate(const MatchingOracle& m, double gamma, IntCost C, std::size_t n,
                                   std::uint64_t seed, const IntegerCosts& c);

struct IterationRecord {
  std::int64_t t = 0;
  std::size_t matching_size = 0;
  std::size_t free_left = 0;
  std::size_t spurious = 0;
  std::int64_t broken_vc = -1;
  std::uint64_t queries = 0;
  std::size_t step1_rounds = 0;
  std::size_t step1_paths = 0;
  std::size_t step2_rounds = 0;
  std::size_t forest_size = 0;
  std::size_t forest_depth = 0;
  std::size_t forest_component = 0;
  std::int64_t escaping_vc = -1;
  std::size_t lemma41_violations = 0;
  std::int64_t phi_min = 0;
  std::int64_t phi_max = 0;
  std::size_t matching_dependencies = 0;
};

struct SlackReport {
  // max(gamma, T * max escaping_vc / n, |F0| / (4n)); see README for the definition.
  double gamma_prime = 0;
  std::size_t spurious = 0;
  std::int64_t broken_vc = -1;
  std::size_t free_left = 0;
  std::size_t lemma41_violations = 0;
};

struct TemplateResult {
  double estimate = 0;  // input cost units
  std::shared_ptr<const ThresholdedMatching> thresholded;
  IterationState final_state;
  SampleEstimate sample;
  std::vector<IterationRecord> trace;
  SlackReport slack;
  bool exact_fallback = false;
  std::shared_ptr<const IntegerCosts> scaled_costs;  // costs the iterations ran on
};

TemplateResult run_template(std::shared_ptr<const IntegerCosts> costs, const TemplateParams& params,
                            MatchingEngine& engine, std::uint64_t seed,
                            const TemplateOptions& options = {});

// Minimum vertex cover of the 1-infeasible edges, by full scan.
std::size_t broken_vertex_cover(const PotentialOracle& phi, const MatchingOracle& m,
                                const IntegerCosts& c);

}  // namespace submatch
