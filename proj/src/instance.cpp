#include "submatch/instance.hpp"

#include <cmath>
#include <string>

#include "submatch/error.hpp"

namespace submatch {

DenseCostMatrix::DenseCostMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
  require(n > 0, "instance size must be positive");
  require(data_.size() == n * n, "cost matrix must have n*n entries");
  for (double x : data_) {
    if (!std::isfinite(x) || x < 0) fail(ErrorCode::MalformedCost, "costs must be finite and >= 0");
  }
}

BipartiteInstance::BipartiteInstance(std::shared_ptr<const CostFunction> fn)
    : fn_(std::move(fn)), n_(0), counter_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  require(fn_ != nullptr, "null cost function");
  n_ = fn_->size();
  require(n_ > 0, "instance size must be positive");
}

double BipartiteInstance::cost(std::size_t u, std::size_t v) const {
  counter_->fetch_add(1, std::memory_order_relaxed);
  double x = fn_->at(u, v);
  if (!std::isfinite(x) || x < 0) {
    fail(ErrorCode::MalformedCost, "cost c(" + std::to_string(u) + "," + std::to_string(v) +
                                       ") is not a finite non-negative value");
  }
  return x;
}

double BipartiteInstance::cost(Vertex a, Vertex b) const {
  require(a.side() != b.side(), "cost query needs one vertex per side");
  return a.is_left() ? cost(a.index(), b.index()) : cost(b.index(), a.index());
}

std::vector<double> materialize(const BipartiteInstance& instance) {
  std::size_t n = instance.size();
  std::vector<double> out(n * n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) out[u * n + v] = instance.cost(u, v);
  return out;
}

BipartiteInstance make_dense_instance(std::size_t n, std::vector<double> row_major) {
  return BipartiteInstance(std::make_shared<DenseCostMatrix>(n, std::move(row_major)));
}

CheckedIntegerCosts::CheckedIntegerCosts(BipartiteInstance instance, IntCost max_cost)
    : instance_(std::move(instance)), max_cost_(max_cost) {
  require(max_cost_ >= 1, "cost bound C must be >= 1");
}

IntCost CheckedIntegerCosts::at(std::size_t u, std::size_t v) const {
  double x = instance_.cost(u, v);
  double r = std::round(x);
  if (r != x || r < 1 || r > static_cast<double>(max_cost_)) {
    fail(ErrorCode::MalformedCost, "cost c(" + std::to_string(u) + "," + std::to_string(v) +
                                       ") is not an integer in [1, C]");
  }
  return static_cast<IntCost>(r);
}

ScaledCosts::ScaledCosts(std::shared_ptr<const IntegerCosts> base, IntCost factor)
    : base_(std::move(base)), factor_(factor) {
  require(base_ != nullptr, "null base costs");
  require(factor_ >= 1, "scale factor must be >= 1");
}

IntCost ScaledCosts::at(std::size_t u, std::size_t v) const {
  IntCost c = base_->at(u, v);
  return c == kAbsent ? kAbsent : c * factor_;
}

DenseIntegerCosts::DenseIntegerCosts(std::size_t n, std::vector<IntCost> row_major)
    : n_(n), data_(std::move(row_major)) {
  require(n > 0, "instance size must be positive");
  require(data_.size() == n * n, "cost matrix must have n*n entries");
  for (IntCost c : data_) {
    if (c == kAbsent) continue;
    if (c < 1) fail(ErrorCode::MalformedCost, "integer costs must be >= 1");
    if (c > max_cost_) max_cost_ = c;
  }
}

}  // namespace submatch
