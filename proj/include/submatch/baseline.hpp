#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "submatch/instance.hpp"
#include "submatch/vertex.hpp"

namespace submatch::baseline {

inline constexpr std::size_t kMaxBaselineN = 2000;
// Costs are scaled to integers at this resolution for the search; reported values sum the
// original costs of the witness, so optimality holds to within n * resolution / 2.
inline constexpr double kCostResolution = 1e-9;
inline constexpr double kNonEdge = std::numeric_limits<double>::infinity();

using Edge = std::pair<std::uint32_t, std::uint32_t>;

// Optimal size-k matching with an LP dual certificate in scaled integers:
//   lambda - row_dual[u] - col_dual[v] <= c(u,v) on every edge, equality on the witness,
//   duals >= 0 and positive only on matched vertices.
struct ExactResult {
  double value = 0;
  std::vector<Edge> witness;
  std::int64_t lambda = 0;
  std::vector<std::int64_t> row_dual;
  std::vector<std::int64_t> col_dual;
};

// costs: n x n row-major, kNonEdge for absent pairs.
ExactResult exact_min_weight_k_matching(const std::vector<double>& costs, std::size_t n,
                                        std::size_t k);
// Reads the whole matrix through the counted oracle.
ExactResult exact_min_weight_k_matching(const BipartiteInstance& instance, std::size_t k);

// Minimum cost of a size-j matching for j = 0..mu, where mu is the maximum matching size.
std::vector<double> min_cost_by_size(const std::vector<double>& costs, std::size_t n);

// Throws if the certificate does not prove optimality of the witness.
void verify_certificate(const std::vector<double>& costs, std::size_t n, std::size_t k,
                        const ExactResult& result);

// Optimal transport cost between mass vectors under metric[i * nu.size() + j].
double exact_emd(const std::vector<double>& mu, const std::vector<double>& nu,
                 const std::vector<double>& metric);

std::size_t max_matching_size(std::size_t n, const std::vector<Edge>& edges);
// Minimum vertex cover of a bipartite edge list (V0 index, V1 index) via Konig's theorem.
std::vector<Vertex> min_vertex_cover_bipartite(std::size_t n, const std::vector<Edge>& edges);

// Largest-cost edge of a matching after dropping its `drop` most expensive edges; 0 if empty.
double max_edge_after_drop(const std::vector<double>& costs, std::size_t n,
                           const std::vector<Edge>& matching, std::size_t drop);

}  // namespace submatch::baseline
