#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "submatch/instance.hpp"
#include "submatch/mcm.hpp"
#include "submatch/oracles.hpp"
#include "submatch/template.hpp"

namespace submatch {

struct ReductionConfig {
  double alpha = 0.85;
  double beta = 1.0;
  double gamma = 0.03;
  double xi_pad = 0.075;

  // gamma = (beta - alpha) / 5, xi_pad = (beta - alpha) / 2.
  static ReductionConfig for_window(double alpha, double beta);
  // 0 <= alpha < beta <= 1, 0 < gamma < 1, 0 < xi_pad <= (beta - alpha) / 2.
  void validate() const;
  // gamma < (beta - alpha) / 4, the regime where the characteristic-cost argument applies.
  bool strict() const { return gamma < (beta - alpha) / 4; }
};

struct CharacteristicCost {
  double w_bar = 0;
  std::vector<double> ladder;  // sorted sampled costs
  std::size_t index = 0;       // position of w_bar in the ladder
  std::size_t probes = 0;      // approx_match calls made by the binary search
};

CharacteristicCost find_characteristic_cost(const BipartiteInstance& instance,
                                            const ReductionConfig& config, MatchingEngine& engine,
                                            std::uint64_t seed);

enum class OverThreshold { Remove, Clamp };

// c̄ = ceil(c / unit) + 1 on costs c <= w, computed on integers at 1e-9 resolution.
// Costs above w are either non-edges or clamped to w (and counted).
class RoundedCosts final : public IntegerCosts {
 public:
  RoundedCosts(BipartiteInstance base, double unit, double w, OverThreshold policy);

  std::size_t size() const override { return base_.size(); }
  IntCost at(std::size_t u, std::size_t v) const override;
  IntCost max_cost() const override { return C_; }

  // Scale-back factor: unit * c̄ lies in [c, c + 2 unit].
  double unit() const { return unit_; }
  std::int64_t unit_scaled() const { return unit_scaled_; }
  std::int64_t w_scaled() const { return w_scaled_; }
  std::uint64_t clamped() const { return clamped_->load(std::memory_order_relaxed); }
  // The integer rounding rule on a scaled cost.
  IntCost round_scaled(std::int64_t c_scaled) const;

 private:
  BipartiteInstance base_;
  double unit_;
  std::int64_t unit_scaled_;
  std::int64_t w_scaled_;
  IntCost C_;
  OverThreshold policy_;
  std::shared_ptr<std::atomic<std::uint64_t>> clamped_;
};

std::int64_t to_scaled(double c);

// unit = gamma^2 w / 2, so c̄ = ceil(2c / (gamma^2 w)) + 1 and C = 2 / gamma^2 + 2.
std::shared_ptr<RoundedCosts> round_costs(const BipartiteInstance& instance, double gamma, double w,
                                          OverThreshold policy = OverThreshold::Clamp);

struct Padding {
  std::size_t n = 0;        // real vertices per side
  std::size_t dummies = 0;  // ceil((1 - beta + xi_pad) n) per side
  std::size_t n_bar = 0;
  double offset = 0;        // 2 dummies - xi_pad n, subtracted by unpad_estimate
  double unpad_estimate(double c) const { return c - offset; }
};

Padding padding_for(std::size_t n, double beta, double xi_pad);

// Real block from `inner`; dummy-real pairs cost 1; dummy-dummy pairs are non-edges.
class PaddedCosts final : public IntegerCosts {
 public:
  PaddedCosts(std::shared_ptr<const IntegerCosts> inner, Padding padding);
  std::size_t size() const override { return padding_.n_bar; }
  IntCost at(std::size_t u, std::size_t v) const override;
  IntCost max_cost() const override { return std::max<IntCost>(1, inner_->max_cost()); }
  const Padding& padding() const { return padding_; }

 private:
  std::shared_ptr<const IntegerCosts> inner_;
  Padding padding_;
};

std::shared_ptr<PaddedCosts> pad_dummies(std::shared_ptr<const IntegerCosts> inner, double beta,
                                         double xi_pad);

// Restriction of a padded matching to real x real pairs.
class UnpaddedMatching final : public MatchingOracle {
 public:
  UnpaddedMatching(MatchingPtr padded, std::size_t n);
  Mate mate(Vertex v) const override;
  std::string_view kind() const override { return "unpadded-matching"; }
  std::vector<const Oracle*> dependencies() const override { return {padded_.get()}; }

 private:
  MatchingPtr padded_;
};

struct PipelineOptions {
  ParameterMode mode = ParameterMode::Practical;
  std::int64_t T = 6;
  std::int64_t k = 5;
  // Practical rounding: unit = gamma * w_bar / levels; 0 selects levels = T - 1.
  double levels = 0;
  // Practical rounding unit in input cost units; 0 derives it from levels.
  double unit = 0;
  std::int64_t max_forest_rounds = 0;
  bool desk_checks = false;
  bool diagnostics = true;
};

struct Report {
  double alpha = 0, beta = 0, gamma = 0, xi_pad = 0;
  double w_bar = 0;
  std::int64_t C = 0;
  double estimate = 0;
  double matched_fraction = 0;
  std::uint64_t total_queries = 0;
  std::string backend;
  std::uint64_t seed = 0;
  std::map<std::string, double> stage_timings;  // milliseconds

  std::size_t n = 0;
  std::size_t n_bar = 0;
  double unit = 0;
  std::int64_t T = 0;
  std::string k;
  std::string params;
  bool strict = false;
  double gamma_prime = 0;
  std::size_t free_left = 0;
  std::size_t spurious = 0;
  bool exact_fallback = false;
  std::uint64_t subroutine_calls = 0;
  std::uint64_t max_call_queries = 0;
  std::uint64_t call_budget = 0;
  std::uint64_t budget_violations = 0;
  std::uint64_t exhausted_calls = 0;
  std::vector<std::string> degradations;
};

struct MwmEstimate {
  double estimate = 0;
  MatchingPtr matching;  // real x real pairs, thresholded
  Report report;
  CharacteristicCost characteristic;
  TemplateResult template_result;
  std::shared_ptr<const RoundedCosts> rounded;
  std::shared_ptr<const PaddedCosts> padded;
};

MwmEstimate estimate_min_weight_matching(const BipartiteInstance& instance,
                                         const ReductionConfig& config, const Backend& backend,
                                         const PipelineOptions& options = {});

struct KnapsackEvaluation {
  double xi = 0;
  double estimate = 0;
  bool feasible = false;
};

struct KnapsackResult {
  double size_estimate = 0;
  double xi = 0;
  std::vector<KnapsackEvaluation> evaluations;
  std::uint64_t total_queries = 0;
};

// Binary search over xi in {0, gamma/4, ..., 1}; each probe runs the estimator with
// (alpha, beta) = (xi - gamma/4, xi) and is feasible when its estimate is <= B.
KnapsackResult max_matching_under_budget(const BipartiteInstance& instance, double budget,
                                         double gamma, const Backend& backend,
                                         const PipelineOptions& options = {});

}  // namespace submatch
