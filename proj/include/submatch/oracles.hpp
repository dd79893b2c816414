#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "submatch/vertex.hpp"

namespace submatch {

// Common base for lazily evaluated oracles. Oracles are immutable after construction and
// reference the oracles they were composed from.
class Oracle {
 public:
  explicit Oracle(std::size_t n) : n_(n) {}
  virtual ~Oracle() = default;
  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  std::size_t n() const { return n_; }
  virtual std::string_view kind() const = 0;
  virtual std::vector<const Oracle*> dependencies() const { return {}; }

 private:
  std::size_t n_;
};

class MatchingOracle : public Oracle {
 public:
  using Oracle::Oracle;
  virtual Mate mate(Vertex v) const = 0;
  virtual std::optional<std::size_t> size_hint() const { return std::nullopt; }
};

class PotentialOracle : public Oracle {
 public:
  PotentialOracle(std::size_t n, std::int64_t range_bound);
  std::int64_t eval(Vertex v) const;
  // Bound R on the number of distinct values eval may take.
  std::int64_t range_bound() const { return range_bound_; }

 protected:
  virtual std::int64_t compute(Vertex v) const = 0;

 private:
  static constexpr std::int64_t kUnknown = INT64_MIN;
  std::int64_t range_bound_;
  std::unique_ptr<std::atomic<std::int64_t>[]> cache_;
};

class MembershipOracle : public Oracle {
 public:
  explicit MembershipOracle(std::size_t n);
  bool contains(Vertex v) const;

 protected:
  virtual bool compute(Vertex v) const = 0;

 private:
  std::unique_ptr<std::atomic<std::uint8_t>[]> cache_;
};

using MatchingPtr = std::shared_ptr<const MatchingOracle>;
using PotentialPtr = std::shared_ptr<const PotentialOracle>;
using MembershipPtr = std::shared_ptr<const MembershipOracle>;

// Memo table for mate answers: 0 unknown, 1 unmatched, otherwise code + 2.
class MateCache {
 public:
  explicit MateCache(std::size_t n);
  std::optional<Mate> get(Vertex v) const;
  void put(Vertex v, Mate m) const;

 private:
  std::unique_ptr<std::atomic<std::uint32_t>[]> slots_;
};

class EmptyMatching final : public MatchingOracle {
 public:
  using MatchingOracle::MatchingOracle;
  Mate mate(Vertex) const override { return std::nullopt; }
  std::optional<std::size_t> size_hint() const override { return 0; }
  std::string_view kind() const override { return "empty-matching"; }
};

// Matching held in two mate arrays.
class ExplicitMatching final : public MatchingOracle {
 public:
  // Pairs are (V0 index, V1 index); throws if they do not form a matching.
  ExplicitMatching(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs);

  Mate mate(Vertex v) const override;
  std::optional<std::size_t> size_hint() const override { return size_; }
  std::string_view kind() const override { return "explicit-matching"; }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs() const;

 private:
  static constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> left_mate_;
  std::vector<std::uint32_t> right_mate_;
  std::size_t size_ = 0;
};

// Base matching XOR a set of node-disjoint augmenting paths. Each path is a vertex sequence
// v0, v1, ..., v_{2l+1} starting at a free V0 vertex and ending at a free V1 vertex.
class AugmentedMatching final : public MatchingOracle {
 public:
  AugmentedMatching(MatchingPtr base, const std::vector<std::vector<Vertex>>& paths);

  Mate mate(Vertex v) const override;
  std::optional<std::size_t> size_hint() const override;
  std::string_view kind() const override { return "augmented-matching"; }
  std::vector<const Oracle*> dependencies() const override { return {base_.get()}; }
  std::size_t path_count() const { return path_count_; }
  const MatchingOracle& base() const { return *base_; }

 private:
  MatchingPtr base_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> changed_;  // sorted (code, mate code)
  std::size_t path_count_;
  MateCache cache_;
};

class ZeroPotential final : public PotentialOracle {
 public:
  ZeroPotential(std::size_t n, std::int64_t range_bound) : PotentialOracle(n, range_bound) {}
  std::string_view kind() const override { return "zero-potential"; }

 protected:
  std::int64_t compute(Vertex) const override { return 0; }
};

class ExplicitPotential final : public PotentialOracle {
 public:
  ExplicitPotential(std::vector<std::int64_t> left, std::vector<std::int64_t> right,
                    std::int64_t range_bound);
  std::string_view kind() const override { return "explicit-potential"; }

 protected:
  std::int64_t compute(Vertex v) const override;

 private:
  std::vector<std::int64_t> left_;
  std::vector<std::int64_t> right_;
};

class ExplicitMembership final : public MembershipOracle {
 public:
  ExplicitMembership(std::vector<bool> left, std::vector<bool> right);
  std::string_view kind() const override { return "explicit-membership"; }

 protected:
  bool compute(Vertex v) const override;

 private:
  std::vector<bool> left_;
  std::vector<bool> right_;
};

class FunctionMembership final : public MembershipOracle {
 public:
  FunctionMembership(std::size_t n, std::function<bool(Vertex)> fn,
                     std::vector<const Oracle*> deps = {});
  std::string_view kind() const override { return "function-membership"; }
  std::vector<const Oracle*> dependencies() const override { return deps_; }

 protected:
  bool compute(Vertex v) const override { return fn_(v); }

 private:
  std::function<bool(Vertex)> fn_;
  std::vector<const Oracle*> deps_;
};

MembershipPtr all_vertices(std::size_t n);

// Number of distinct matching oracles reachable from the given oracle (itself included).
std::size_t matching_dependency_count(const Oracle& root);

// Enumerates matched pairs (V0 index, V1 index) by querying every V0 vertex.
std::vector<std::pair<std::uint32_t, std::uint32_t>> matched_pairs(const MatchingOracle& m);

}  // namespace submatch
