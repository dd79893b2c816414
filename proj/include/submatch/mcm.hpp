#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "submatch/instance.hpp"
#include "submatch/oracles.hpp"
#include "submatch/rng.hpp"

namespace submatch {

// Deterministic edge predicate between V0 index u and V1 index v.
class GraphView {
 public:
  virtual ~GraphView() = default;
  virtual std::size_t n() const = 0;
  virtual bool has_edge(std::uint32_t u, std::uint32_t v) const = 0;
};

class FunctionGraphView final : public GraphView {
 public:
  FunctionGraphView(std::size_t n, std::function<bool(std::uint32_t, std::uint32_t)> fn)
      : n_(n), fn_(std::move(fn)) {}
  std::size_t n() const override { return n_; }
  bool has_edge(std::uint32_t u, std::uint32_t v) const override { return fn_(u, v); }

 private:
  std::size_t n_;
  std::function<bool(std::uint32_t, std::uint32_t)> fn_;
};

struct SubroutineParams {
  double epsilon = 0.2;   // (0, 0.2] for the paper's regime; the sampled budget uses any (0, 1)
  double delta_in = 0.1;  // (0, 1)
  double gamma = 0.1;     // (0, 1)
  std::int64_t k = 3;     // >= 1
  void validate() const;
};

enum class BackendKind { Exact, Sampled };

std::string to_string(BackendKind kind);
BackendKind parse_backend(const std::string& name);

struct Backend {
  BackendKind kind = BackendKind::Exact;
  std::uint64_t seed = 0;
  double epsilon = 0.3;  // query knob for the sampled budget n^{2-epsilon}
};

// delta_in^5 / 2000, and delta_in^5 / (2000 R^10) for the bucketed forward variant.
double delta_out(double delta_in);
double delta_out_forward(double delta_in, std::int64_t range_bound);

// Exact: n^2. Sampled: min(n^2, ceil(n^{2-epsilon})).
std::uint64_t backend_query_budget(BackendKind kind, const SubroutineParams& params, std::size_t n);

struct ApproxMatchResult {
  std::int64_t size_estimate = 0;
  MatchingPtr matching;
};

struct CallStats {
  std::string name;
  std::uint64_t edge_queries = 0;
  std::uint64_t budget = 0;
  bool exhausted = false;
  bool success = false;
};

struct EngineStats {
  std::uint64_t calls = 0;
  std::uint64_t edge_queries = 0;
  std::uint64_t max_call_queries = 0;
  std::uint64_t budget_violations = 0;  // calls that read more than their budget
  std::uint64_t exhausted_calls = 0;    // sampled calls stopped by the cap
};

// Runs the matching subroutines for one backend. Returned oracles are immutable and shareable;
// the engine itself carries the sampled backend's random stream and call statistics and is
// used by one thread at a time.
class MatchingEngine {
 public:
  explicit MatchingEngine(Backend backend);

  const Backend& backend() const { return backend_; }
  const EngineStats& stats() const { return stats_; }
  std::uint64_t budget(std::size_t n) const;

  ApproxMatchResult approx_match(const GraphView& g, double epsilon);

  // nullptr stands for ⊥.
  MatchingPtr large_match(const GraphView& g, const MembershipOracle& a, double epsilon,
                          double delta_in);

  // Matching in the forward graph w.r.t. (phi, m) restricted to A, or nullptr.
  MatchingPtr large_matching_forward(const PotentialOracle& phi, const MembershipOracle& a,
                                     double delta_in, double epsilon, const MatchingOracle& m,
                                     const IntegerCosts& c);

  // M_in augmented along node-disjoint eligible augmenting paths of length <= k, or nullptr.
  MatchingPtr augment_eligible(const PotentialOracle& phi, const MatchingPtr& m_in, std::int64_t k,
                               double gamma, double epsilon, const IntegerCosts& c);

 private:
  class Meter;

  Backend backend_;
  Rng rng_;
  EngineStats stats_;
};

// Maximum matching on an explicit bipartite adjacency (V0 index -> V1 indices), Hopcroft-Karp.
std::vector<std::pair<std::uint32_t, std::uint32_t>> hopcroft_karp(
    std::size_t n, const std::vector<std::vector<std::uint32_t>>& adj);

}  // namespace submatch
