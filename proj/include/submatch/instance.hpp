#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "submatch/vertex.hpp"

namespace submatch {

// Callback access to an n x n cost matrix. Row index is the V0 vertex, column the V1 vertex.
class CostFunction {
 public:
  virtual ~CostFunction() = default;
  virtual std::size_t size() const = 0;
  virtual double at(std::size_t u, std::size_t v) const = 0;
  virtual std::string name() const = 0;
};

class DenseCostMatrix final : public CostFunction {
 public:
  DenseCostMatrix(std::size_t n, std::vector<double> row_major);

  std::size_t size() const override { return n_; }
  double at(std::size_t u, std::size_t v) const override { return data_[u * n_ + v]; }
  std::string name() const override { return "dense"; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

// Query-counted view of a cost function. Copies share the function and the counter.
class BipartiteInstance {
 public:
  explicit BipartiteInstance(std::shared_ptr<const CostFunction> fn);

  std::size_t size() const { return n_; }

  // Counted read of c(u, v) for u in V0, v in V1.
  double cost(std::size_t u, std::size_t v) const;
  // Either argument order; the vertices must lie on opposite sides.
  double cost(Vertex a, Vertex b) const;

  std::uint64_t query_count() const { return counter_->load(std::memory_order_relaxed); }
  void reset_query_count() const { counter_->store(0, std::memory_order_relaxed); }

  const CostFunction& function() const { return *fn_; }
  std::shared_ptr<const CostFunction> function_ptr() const { return fn_; }

 private:
  std::shared_ptr<const CostFunction> fn_;
  std::size_t n_;
  std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

// Reads every entry (n^2 counted queries).
std::vector<double> materialize(const BipartiteInstance& instance);

BipartiteInstance make_dense_instance(std::size_t n, std::vector<double> row_major);

// Integer costs consumed by the primal-dual template. kAbsent marks a non-edge.
using IntCost = std::int64_t;
inline constexpr IntCost kAbsent = std::numeric_limits<IntCost>::max();

class IntegerCosts {
 public:
  virtual ~IntegerCosts() = default;
  virtual std::size_t size() const = 0;
  virtual IntCost at(std::size_t u, std::size_t v) const = 0;
  // Upper bound C on present costs.
  virtual IntCost max_cost() const = 0;

  IntCost operator()(Vertex a, Vertex b) const {
    return a.is_left() ? at(a.index(), b.index()) : at(b.index(), a.index());
  }
};

// Integer view of an instance whose costs are already integers in [1, C].
class CheckedIntegerCosts final : public IntegerCosts {
 public:
  CheckedIntegerCosts(BipartiteInstance instance, IntCost max_cost);

  std::size_t size() const override { return instance_.size(); }
  IntCost at(std::size_t u, std::size_t v) const override;
  IntCost max_cost() const override { return max_cost_; }

 private:
  BipartiteInstance instance_;
  IntCost max_cost_;
};

// Multiplies every present cost by a positive integer factor.
class ScaledCosts final : public IntegerCosts {
 public:
  ScaledCosts(std::shared_ptr<const IntegerCosts> base, IntCost factor);

  std::size_t size() const override { return base_->size(); }
  IntCost at(std::size_t u, std::size_t v) const override;
  IntCost max_cost() const override { return base_->max_cost() * factor_; }
  IntCost factor() const { return factor_; }

 private:
  std::shared_ptr<const IntegerCosts> base_;
  IntCost factor_;
};

// Dense integer costs, uncounted. Used by tests and exact fallbacks.
class DenseIntegerCosts final : public IntegerCosts {
 public:
  DenseIntegerCosts(std::size_t n, std::vector<IntCost> row_major);

  std::size_t size() const override { return n_; }
  IntCost at(std::size_t u, std::size_t v) const override { return data_[u * n_ + v]; }
  IntCost max_cost() const override { return max_cost_; }

 private:
  std::size_t n_;
  std::vector<IntCost> data_;
  IntCost max_cost_ = 1;
};

}  // namespace submatch
