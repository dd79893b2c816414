#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <vector>

#include "submatch/instance.hpp"
#include "submatch/oracles.hpp"

namespace testing {

using namespace submatch;

// Integer table without range checks, for eligibility arithmetic on arbitrary values.
class TableCosts final : public IntegerCosts {
 public:
  TableCosts(std::size_t n, std::vector<IntCost> data) : n_(n), data_(std::move(data)) {}
  std::size_t size() const override { return n_; }
  IntCost at(std::size_t u, std::size_t v) const override { return data_[u * n_ + v]; }
  IntCost max_cost() const override {
    IntCost m = 1;
    for (IntCost x : data_)
      if (x != kAbsent) m = std::max(m, x);
    return m;
  }

 private:
  std::size_t n_;
  std::vector<IntCost> data_;
};

inline std::shared_ptr<TableCosts> table(std::size_t n, std::vector<IntCost> data) {
  return std::make_shared<TableCosts>(n, std::move(data));
}

inline std::shared_ptr<TableCosts> constant_table(std::size_t n, IntCost value) {
  return table(n, std::vector<IntCost>(n * n, value));
}

inline PotentialPtr potential(std::vector<std::int64_t> left, std::vector<std::int64_t> right,
                              std::int64_t range = 1000) {
  return std::make_shared<ExplicitPotential>(std::move(left), std::move(right), range);
}

inline MatchingPtr matching(std::size_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs) {
  return std::make_shared<ExplicitMatching>(n, pairs);
}

// Checks symmetry and bipartiteness of every mate answer; returns the number of pairs.
inline std::size_t checked_size(const MatchingOracle& m) {
  std::size_t size = 0;
  for (std::uint32_t i = 0; i < m.n(); ++i) {
    for (Vertex v : {Vertex::left(i), Vertex::right(i)}) {
      Mate w = m.mate(v);
      if (!w) continue;
      if (w->side() == v.side() || w->index() >= m.n()) throw std::logic_error("mate on the wrong side");
      Mate back = m.mate(*w);
      if (!back || *back != v) throw std::logic_error("mate is not symmetric");
      if (v.is_left()) ++size;
    }
  }
  return size;
}

// Minimum over all permutations of sum c[i][p(i)]; absent entries are +inf.
inline double brute_force_perfect(const std::vector<double>& c, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += c[i * n + p[i]];
    best = std::min(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

}  // namespace testing
