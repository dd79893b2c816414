#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "submatch/instance.hpp"

namespace submatch {

// Costs are computed on demand from (seed, u, v); nothing n x n is stored.
class UniformCosts final : public CostFunction {
 public:
  UniformCosts(std::size_t n, std::uint64_t seed) : n_(n), seed_(seed) {}
  std::size_t size() const override { return n_; }
  double at(std::size_t u, std::size_t v) const override;
  std::string name() const override { return "uniform"; }

 private:
  std::size_t n_;
  std::uint64_t seed_;
};

// V0 and V1 each get n points uniform in [0,1]^d; cost is the Euclidean distance.
class EuclideanCosts final : public CostFunction {
 public:
  EuclideanCosts(std::size_t n, std::size_t dim, std::uint64_t seed);
  std::size_t size() const override { return n_; }
  double at(std::size_t u, std::size_t v) const override;
  std::string name() const override { return "euclidean"; }
  std::size_t dim() const { return dim_; }
  // Row-major n x dim coordinates.
  const std::vector<double>& left_points() const { return left_; }
  const std::vector<double>& right_points() const { return right_; }

 private:
  std::size_t n_, dim_;
  std::vector<double> left_, right_;
};

// Random bipartite graph with edge probability p embedded as a (1,2)-metric:
// cost 1 on edges, 2 elsewhere.
class OneTwoMetricCosts final : public CostFunction {
 public:
  OneTwoMetricCosts(std::size_t n, double p, std::uint64_t seed);
  std::size_t size() const override { return n_; }
  double at(std::size_t u, std::size_t v) const override;
  std::string name() const override { return "one-two-metric"; }

 private:
  std::size_t n_;
  double p_;
  std::uint64_t seed_;
};

// Cost 1 on a hidden random perfect matching, 2 elsewhere.
class PermutationCosts final : public CostFunction {
 public:
  PermutationCosts(std::size_t n, std::uint64_t seed);
  std::size_t size() const override { return n_; }
  double at(std::size_t u, std::size_t v) const override { return perm_[u] == v ? 1.0 : 2.0; }
  std::string name() const override { return "permutation"; }
  const std::vector<std::uint32_t>& permutation() const { return perm_; }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> perm_;
};

struct GeneratorSpec {
  std::string name = "uniform";  // uniform | euclidean | one-two-metric | permutation | file
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t dim = 2;
  double p = 0.5;
  std::string path;  // for "file"
};

std::shared_ptr<const CostFunction> make_cost_function(const GeneratorSpec& spec);

}  // namespace submatch
