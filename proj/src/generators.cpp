#include "submatch/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "submatch/error.hpp"
#include "submatch/io.hpp"
#include "submatch/rng.hpp"

namespace submatch {
namespace {

std::uint64_t cell_hash(std::uint64_t seed, std::size_t u, std::size_t v) {
  return splitmix64(splitmix64(seed ^ 0x5bd1e995ULL) ^ (static_cast<std::uint64_t>(u) << 32 | v));
}

}  // namespace

double UniformCosts::at(std::size_t u, std::size_t v) const {
  return to_unit(cell_hash(seed_, u, v));
}

EuclideanCosts::EuclideanCosts(std::size_t n, std::size_t dim, std::uint64_t seed)
    : n_(n), dim_(dim), left_(n * dim), right_(n * dim) {
  require(n > 0, "n must be positive");
  require(dim > 0, "dimension must be positive");
  Rng rng(derive_seed(seed, "euclidean"));
  for (double& x : left_) x = uniform01(rng);
  for (double& x : right_) x = uniform01(rng);
}

double EuclideanCosts::at(std::size_t u, std::size_t v) const {
  double s = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    double d = left_[u * dim_ + i] - right_[v * dim_ + i];
    s += d * d;
  }
  return std::sqrt(s);
}

OneTwoMetricCosts::OneTwoMetricCosts(std::size_t n, double p, std::uint64_t seed)
    : n_(n), p_(p), seed_(seed) {
  require(p >= 0 && p <= 1, "edge probability must be in [0,1]");
}

double OneTwoMetricCosts::at(std::size_t u, std::size_t v) const {
  return to_unit(cell_hash(seed_, u, v)) < p_ ? 1.0 : 2.0;
}

PermutationCosts::PermutationCosts(std::size_t n, std::uint64_t seed) : n_(n), perm_(n) {
  std::iota(perm_.begin(), perm_.end(), 0u);
  Rng rng(derive_seed(seed, "permutation"));
  for (std::size_t i = n; i > 1; --i) std::swap(perm_[i - 1], perm_[uniform_below(rng, i)]);
}

std::shared_ptr<const CostFunction> make_cost_function(const GeneratorSpec& spec) {
  if (spec.name == "file") {
    require(!spec.path.empty(), "file generator needs a path");
    CostMatrixData data = read_cost_matrix(spec.path);
    return std::make_shared<DenseCostMatrix>(data.n, std::move(data.costs));
  }
  require(spec.n > 0, "n must be positive");
  require(spec.n < (1u << 31), "n too large");
  if (spec.name == "uniform") return std::make_shared<UniformCosts>(spec.n, spec.seed);
  if (spec.name == "euclidean")
    return std::make_shared<EuclideanCosts>(spec.n, spec.dim, spec.seed);
  if (spec.name == "one-two-metric")
    return std::make_shared<OneTwoMetricCosts>(spec.n, spec.p, spec.seed);
  if (spec.name == "permutation") return std::make_shared<PermutationCosts>(spec.n, spec.seed);
  fail(ErrorCode::InvalidArgument, "unknown generator '" + spec.name + "'");
}

}  // namespace submatch
