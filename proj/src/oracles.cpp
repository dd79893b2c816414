#include "submatch/oracles.hpp"

#include <algorithm>
#include <unordered_set>

#include "submatch/error.hpp"

namespace submatch {

PotentialOracle::PotentialOracle(std::size_t n, std::int64_t range_bound)
    : Oracle(n), range_bound_(range_bound), cache_(new std::atomic<std::int64_t>[2 * n]) {
  require(range_bound >= 1, "potential range bound must be >= 1");
  for (std::size_t i = 0; i < 2 * n; ++i) cache_[i].store(kUnknown, std::memory_order_relaxed);
}

std::int64_t PotentialOracle::eval(Vertex v) const {
  auto& slot = cache_[v.code()];
  std::int64_t x = slot.load(std::memory_order_relaxed);
  if (x != kUnknown) return x;
  x = compute(v);
  slot.store(x, std::memory_order_relaxed);
  return x;
}

MembershipOracle::MembershipOracle(std::size_t n)
    : Oracle(n), cache_(new std::atomic<std::uint8_t>[2 * n]) {
  for (std::size_t i = 0; i < 2 * n; ++i) cache_[i].store(0, std::memory_order_relaxed);
}

bool MembershipOracle::contains(Vertex v) const {
  auto& slot = cache_[v.code()];
  std::uint8_t x = slot.load(std::memory_order_relaxed);
  if (x != 0) return x == 2;
  bool in = compute(v);
  slot.store(in ? 2 : 1, std::memory_order_relaxed);
  return in;
}

MateCache::MateCache(std::size_t n) : slots_(new std::atomic<std::uint32_t>[2 * n]) {
  for (std::size_t i = 0; i < 2 * n; ++i) slots_[i].store(0, std::memory_order_relaxed);
}

std::optional<Mate> MateCache::get(Vertex v) const {
  std::uint32_t x = slots_[v.code()].load(std::memory_order_relaxed);
  if (x == 0) return std::nullopt;
  if (x == 1) return Mate{};
  return Mate{Vertex::from_code(x - 2)};
}

void MateCache::put(Vertex v, Mate m) const {
  slots_[v.code()].store(m ? m->code() + 2 : 1, std::memory_order_relaxed);
}

ExplicitMatching::ExplicitMatching(
    std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs)
    : MatchingOracle(n), left_mate_(n, kNone), right_mate_(n, kNone) {
  for (auto [u, v] : pairs) {
    require(u < n && v < n, "matched vertex out of range");
    require(left_mate_[u] == kNone && right_mate_[v] == kNone, "pairs do not form a matching");
    left_mate_[u] = v;
    right_mate_[v] = u;
  }
  size_ = pairs.size();
}

Mate ExplicitMatching::mate(Vertex v) const {
  if (v.is_left()) {
    std::uint32_t m = left_mate_[v.index()];
    return m == kNone ? Mate{} : Mate{Vertex::right(m)};
  }
  std::uint32_t m = right_mate_[v.index()];
  return m == kNone ? Mate{} : Mate{Vertex::left(m)};
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> ExplicitMatching::pairs() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t u = 0; u < left_mate_.size(); ++u)
    if (left_mate_[u] != kNone) out.emplace_back(u, left_mate_[u]);
  return out;
}

AugmentedMatching::AugmentedMatching(MatchingPtr base, const std::vector<std::vector<Vertex>>& paths)
    : MatchingOracle(base ? base->n() : 0), base_(std::move(base)), path_count_(paths.size()),
      cache_(n()) {
  require(base_ != nullptr, "null base matching");
  for (const auto& p : paths) {
    require(p.size() >= 2 && p.size() % 2 == 0, "augmenting path must have odd length");
    require(p.front().is_left() && p.back().is_right(), "augmenting path must run V0 to V1");
    for (std::size_t i = 0; i + 1 < p.size(); i += 2) {
      changed_.emplace_back(p[i].code(), p[i + 1].code());
      changed_.emplace_back(p[i + 1].code(), p[i].code());
    }
  }
  std::sort(changed_.begin(), changed_.end());
  for (std::size_t i = 1; i < changed_.size(); ++i)
    require(changed_[i].first != changed_[i - 1].first, "augmenting paths are not node-disjoint");
}

Mate AugmentedMatching::mate(Vertex v) const {
  if (auto hit = cache_.get(v)) return *hit;
  auto it = std::lower_bound(changed_.begin(), changed_.end(),
                             std::make_pair(v.code(), std::uint32_t{0}));
  Mate m = (it != changed_.end() && it->first == v.code()) ? Mate{Vertex::from_code(it->second)}
                                                           : base_->mate(v);
  cache_.put(v, m);
  return m;
}

std::optional<std::size_t> AugmentedMatching::size_hint() const {
  auto b = base_->size_hint();
  if (!b) return std::nullopt;
  return *b + path_count_;
}

ExplicitPotential::ExplicitPotential(std::vector<std::int64_t> left, std::vector<std::int64_t> right,
                                     std::int64_t range_bound)
    : PotentialOracle(left.size(), range_bound), left_(std::move(left)), right_(std::move(right)) {
  require(left_.size() == right_.size(), "potential sides must have equal size");
}

std::int64_t ExplicitPotential::compute(Vertex v) const {
  return v.is_left() ? left_[v.index()] : right_[v.index()];
}

ExplicitMembership::ExplicitMembership(std::vector<bool> left, std::vector<bool> right)
    : MembershipOracle(left.size()), left_(std::move(left)), right_(std::move(right)) {
  require(left_.size() == right_.size(), "membership sides must have equal size");
}

bool ExplicitMembership::compute(Vertex v) const {
  return v.is_left() ? left_[v.index()] : right_[v.index()];
}

FunctionMembership::FunctionMembership(std::size_t n, std::function<bool(Vertex)> fn,
                                       std::vector<const Oracle*> deps)
    : MembershipOracle(n), fn_(std::move(fn)), deps_(std::move(deps)) {}

MembershipPtr all_vertices(std::size_t n) {
  return std::make_shared<FunctionMembership>(n, [](Vertex) { return true; });
}

std::size_t matching_dependency_count(const Oracle& root) {
  std::unordered_set<const Oracle*> seen;
  std::vector<const Oracle*> stack{&root};
  std::size_t count = 0;
  while (!stack.empty()) {
    const Oracle* o = stack.back();
    stack.pop_back();
    if (!seen.insert(o).second) continue;
    if (dynamic_cast<const MatchingOracle*>(o) != nullptr) ++count;
    for (const Oracle* d : o->dependencies())
      if (d != nullptr) stack.push_back(d);
  }
  return count;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> matched_pairs(const MatchingOracle& m) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t u = 0; u < m.n(); ++u)
    if (Mate v = m.mate(Vertex::left(u))) out.emplace_back(u, v->index());
  return out;
}

}  // namespace submatch
