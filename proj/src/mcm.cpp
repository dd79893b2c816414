#include "submatch/mcm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <unordered_set>

#include "submatch/eligibility.hpp"
#include "submatch/error.hpp"

namespace submatch {
namespace {

constexpr std::uint32_t kNone = UINT32_MAX;
using Pairs = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

void split_members(const MembershipOracle& a, std::vector<std::uint32_t>& left,
                   std::vector<std::uint32_t>& right) {
  for (std::uint32_t i = 0; i < a.n(); ++i) {
    if (a.contains(Vertex::left(i))) left.push_back(i);
    if (a.contains(Vertex::right(i))) right.push_back(i);
  }
}

// Size threshold "at least x*n" that a returned matching must meet; never below one edge.
bool meets(std::size_t size, double fraction, std::size_t n) {
  return size >= 1 && static_cast<double>(size) >= fraction * static_cast<double>(n);
}

}  // namespace

void SubroutineParams::validate() const {
  require(epsilon > 0 && epsilon < 1, "epsilon must be in (0, 1)");
  require(delta_in > 0 && delta_in < 1, "delta_in must be in (0, 1)");
  require(gamma > 0 && gamma < 1, "gamma must be in (0, 1)");
  require(k >= 1, "k must be >= 1");
}

std::string to_string(BackendKind kind) { return kind == BackendKind::Exact ? "exact" : "sampled"; }

BackendKind parse_backend(const std::string& name) {
  if (name == "exact") return BackendKind::Exact;
  if (name == "sampled") return BackendKind::Sampled;
  fail(ErrorCode::InvalidArgument, "unknown backend '" + name + "'");
}

double delta_out(double delta_in) { return std::pow(delta_in, 5) / 2000.0; }

double delta_out_forward(double delta_in, std::int64_t range_bound) {
  return std::pow(delta_in, 5) / (2000.0 * std::pow(static_cast<double>(range_bound), 10));
}

std::uint64_t backend_query_budget(BackendKind kind, const SubroutineParams& params, std::size_t n) {
  const auto full = static_cast<std::uint64_t>(n) * n;
  if (n == 0) return 0;
  if (kind == BackendKind::Exact) return full;
  params.validate();
  double cap = std::ceil(std::pow(static_cast<double>(n), 2.0 - params.epsilon));
  return std::min<std::uint64_t>(full, static_cast<std::uint64_t>(cap));
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> hopcroft_karp(
    std::size_t n, const std::vector<std::vector<std::uint32_t>>& adj) {
  std::vector<std::uint32_t> lmate(n, kNone), rmate(n, kNone);
  std::vector<std::uint32_t> dist(n);
  std::vector<std::size_t> it(n);
  const std::uint32_t kInf = UINT32_MAX;
  auto bfs = [&] {
    std::queue<std::uint32_t> q;
    bool found = false;
    for (std::uint32_t u = 0; u < n; ++u) {
      if (lmate[u] == kNone) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = kInf;
      }
    }
    while (!q.empty()) {
      std::uint32_t u = q.front();
      q.pop();
      for (std::uint32_t v : adj[u]) {
        std::uint32_t w = rmate[v];
        if (w == kNone) {
          found = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };
  std::function<bool(std::uint32_t)> dfs = [&](std::uint32_t u) -> bool {
    for (std::size_t& i = it[u]; i < adj[u].size(); ++i) {
      std::uint32_t v = adj[u][i];
      std::uint32_t w = rmate[v];
      if (w == kNone || (dist[w] == dist[u] + 1 && dfs(w))) {
        lmate[u] = v;
        rmate[v] = u;
        ++i;
        return true;
      }
    }
    dist[u] = kInf;
    return false;
  };
  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (std::uint32_t u = 0; u < n; ++u)
      if (lmate[u] == kNone) dfs(u);
  }
  Pairs out;
  for (std::uint32_t u = 0; u < n; ++u)
    if (lmate[u] != kNone) out.emplace_back(u, lmate[u]);
  return out;
}

// Per-call edge-query accounting. Sampled calls stop at the budget.
class MatchingEngine::Meter {
 public:
  Meter(EngineStats& stats, std::uint64_t budget, bool capped)
      : stats_(stats), budget_(budget), capped_(capped) {}
  ~Meter() {
    ++stats_.calls;
    stats_.edge_queries += used_;
    stats_.max_call_queries = std::max(stats_.max_call_queries, used_);
    if (used_ > budget_) ++stats_.budget_violations;
    if (exhausted_) ++stats_.exhausted_calls;
  }
  bool charge() {
    if (capped_ && used_ >= budget_) {
      exhausted_ = true;
      return false;
    }
    ++used_;
    return true;
  }
  bool exhausted() const { return exhausted_; }
  std::uint64_t remaining() const { return used_ >= budget_ ? 0 : budget_ - used_; }

 private:
  EngineStats& stats_;
  std::uint64_t budget_;
  bool capped_;
  std::uint64_t used_ = 0;
  bool exhausted_ = false;
};

namespace {

// Greedy random matching between `left` and `right` with per-vertex probe quota, then
// length-3 augmentations with whatever budget is left.
template <class Edge, class Charge>
Pairs sampled_greedy(const std::vector<std::uint32_t>& left, const std::vector<std::uint32_t>& right,
                     std::size_t n, Rng& rng, std::uint64_t budget, Edge&& edge, Charge&& charge) {
  Pairs out;
  if (left.empty() || right.empty()) return out;
  std::vector<std::uint32_t> order = left;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::uint32_t> free_right = right;
  std::vector<std::uint32_t> lmate(n, kNone), rmate(n, kNone);
  const std::uint64_t quota = std::max<std::uint64_t>(1, budget / (2 * order.size()));
  bool stop = false;
  for (std::uint32_t u : order) {
    for (std::uint64_t q = 0; q < quota && !free_right.empty(); ++q) {
      if (!charge()) {
        stop = true;
        break;
      }
      std::size_t pick = uniform_below(rng, free_right.size());
      std::uint32_t v = free_right[pick];
      if (edge(u, v)) {
        lmate[u] = v;
        rmate[v] = u;
        free_right[pick] = free_right.back();
        free_right.pop_back();
        break;
      }
    }
    if (stop || free_right.empty()) break;
  }
  // Length-3 augmentations u - v = w - v'.
  std::vector<std::uint32_t> matched_right;
  for (std::uint32_t v : right)
    if (rmate[v] != kNone) matched_right.push_back(v);
  std::vector<std::uint32_t> free_left;
  for (std::uint32_t u : order)
    if (lmate[u] == kNone) free_left.push_back(u);
  while (!stop && !free_left.empty() && !matched_right.empty() && !free_right.empty()) {
    std::size_t fi = uniform_below(rng, free_left.size());
    std::uint32_t u = free_left[fi];
    bool done = false;
    for (std::uint64_t q = 0; q < quota && !done; ++q) {
      if (!charge()) {
        stop = true;
        break;
      }
      std::uint32_t v = matched_right[uniform_below(rng, matched_right.size())];
      if (!edge(u, v)) continue;
      std::uint32_t w = rmate[v];
      for (std::uint64_t r = 0; r < quota; ++r) {
        if (!charge()) {
          stop = true;
          break;
        }
        std::size_t pick = uniform_below(rng, free_right.size());
        std::uint32_t v2 = free_right[pick];
        if (edge(w, v2)) {
          lmate[w] = v2;
          rmate[v2] = w;
          lmate[u] = v;
          rmate[v] = u;
          free_right[pick] = free_right.back();
          free_right.pop_back();
          matched_right.push_back(v2);
          done = true;
          break;
        }
      }
      break;
    }
    free_left[fi] = free_left.back();
    free_left.pop_back();
  }
  for (std::uint32_t u : left)
    if (lmate[u] != kNone) out.emplace_back(u, lmate[u]);
  return out;
}

}  // namespace

MatchingEngine::MatchingEngine(Backend backend)
    : backend_(backend), rng_(derive_seed(backend.seed, "mcm")) {
  require(backend_.epsilon > 0 && backend_.epsilon < 1, "backend epsilon must be in (0, 1)");
}

std::uint64_t MatchingEngine::budget(std::size_t n) const {
  SubroutineParams p;
  p.epsilon = backend_.epsilon;
  return backend_query_budget(backend_.kind, p, n);
}

ApproxMatchResult MatchingEngine::approx_match(const GraphView& g, double epsilon) {
  require(epsilon > 0, "epsilon must be positive");
  const std::size_t n = g.n();
  Meter meter(stats_, budget(n), backend_.kind == BackendKind::Sampled);
  Pairs pairs;
  if (backend_.kind == BackendKind::Exact) {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::uint32_t u = 0; u < n; ++u)
      for (std::uint32_t v = 0; v < n; ++v) {
        meter.charge();
        if (g.has_edge(u, v)) adj[u].push_back(v);
      }
    pairs = hopcroft_karp(n, adj);
  } else {
    std::vector<std::uint32_t> all(n);
    for (std::uint32_t i = 0; i < n; ++i) all[i] = i;
    pairs = sampled_greedy(all, all, n, rng_, budget(n),
                           [&](std::uint32_t u, std::uint32_t v) { return g.has_edge(u, v); },
                           [&] { return meter.charge(); });
  }
  ApproxMatchResult r;
  r.size_estimate = static_cast<std::int64_t>(pairs.size());
  r.matching = std::make_shared<ExplicitMatching>(n, pairs);
  return r;
}

MatchingPtr MatchingEngine::large_match(const GraphView& g, const MembershipOracle& a,
                                        double epsilon, double delta_in) {
  require(epsilon > 0, "epsilon must be positive");
  require(delta_in > 0 && delta_in < 1, "delta_in must be in (0, 1)");
  const std::size_t n = g.n();
  Meter meter(stats_, budget(n), backend_.kind == BackendKind::Sampled);
  std::vector<std::uint32_t> left, right;
  split_members(a, left, right);
  Pairs pairs;
  if (backend_.kind == BackendKind::Exact) {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::uint32_t u : left)
      for (std::uint32_t v : right) {
        meter.charge();
        if (g.has_edge(u, v)) adj[u].push_back(v);
      }
    pairs = hopcroft_karp(n, adj);
    if (!meets(pairs.size(), delta_in, n)) return nullptr;
  } else {
    pairs = sampled_greedy(left, right, n, rng_, budget(n),
                           [&](std::uint32_t u, std::uint32_t v) { return g.has_edge(u, v); },
                           [&] { return meter.charge(); });
    if (!meets(pairs.size(), delta_out(delta_in), n)) return nullptr;
  }
  return std::make_shared<ExplicitMatching>(n, pairs);
}

MatchingPtr MatchingEngine::large_matching_forward(const PotentialOracle& phi,
                                                   const MembershipOracle& a, double delta_in,
                                                   double epsilon, const MatchingOracle& m,
                                                   const IntegerCosts& c) {
  require(epsilon > 0, "epsilon must be positive");
  require(delta_in > 0 && delta_in < 1, "delta_in must be in (0, 1)");
  const std::size_t n = m.n();
  const bool sampled = backend_.kind == BackendKind::Sampled;
  const std::uint64_t cap = budget(n);
  Meter meter(stats_, cap, sampled);
  const double r2 = static_cast<double>(phi.range_bound()) * static_cast<double>(phi.range_bound());
  const double bucket_delta = delta_in / r2;
  std::vector<std::uint32_t> left, right;
  split_members(a, left, right);
  std::map<std::int64_t, std::vector<std::uint32_t>> lb, rb;
  for (std::uint32_t u : left) lb[phi.eval(Vertex::left(u))].push_back(u);
  for (std::uint32_t v : right) rb[phi.eval(Vertex::right(v))].push_back(v);
  const double total_pairs = static_cast<double>(left.size()) * static_cast<double>(right.size());
  for (const auto& [i, us] : lb) {
    for (const auto& [j, vs] : rb) {
      // Present costs are >= 1, so only i + j >= 2 can be tight.
      if (i + j < 2) continue;
      const IntCost target = i + j - 1;
      auto edge = [&](std::uint32_t u, std::uint32_t v) {
        if (c.at(u, v) != target) return false;
        Mate mu = m.mate(Vertex::left(u));
        return !(mu && mu->index() == v);
      };
      Pairs pairs;
      if (!sampled) {
        std::vector<std::vector<std::uint32_t>> adj(n);
        for (std::uint32_t u : us)
          for (std::uint32_t v : vs) {
            meter.charge();
            if (edge(u, v)) adj[u].push_back(v);
          }
        pairs = hopcroft_karp(n, adj);
        if (meets(pairs.size(), bucket_delta, n)) return std::make_shared<ExplicitMatching>(n, pairs);
      } else {
        if (meter.exhausted()) return nullptr;
        double share = static_cast<double>(us.size()) * static_cast<double>(vs.size()) / total_pairs;
        auto local = static_cast<std::uint64_t>(std::ceil(share * static_cast<double>(cap)));
        pairs = sampled_greedy(us, vs, n, rng_, local, edge, [&] { return meter.charge(); });
        if (meets(pairs.size(), delta_out_forward(delta_in, phi.range_bound()), n))
          return std::make_shared<ExplicitMatching>(n, pairs);
      }
    }
  }
  return nullptr;
}

namespace {

// Maximal set of node-disjoint augmenting paths of exact length `len` (edges), searched
// depth-first from free V0 vertices in ascending id order, neighbours in ascending order.
class ExactPathSearch {
 public:
  ExactPathSearch(std::size_t n, const std::vector<std::vector<std::uint32_t>>& adj,
                  const std::vector<std::uint32_t>& back, const std::vector<char>& free_right)
      : n_(n), adj_(adj), back_(back), free_right_(free_right) {}

  std::vector<std::vector<Vertex>> run(const std::vector<std::uint32_t>& roots, std::int64_t len) {
    used0_.assign(n_, 0);
    used1_.assign(n_, 0);
    on0_.assign(n_, 0);
    on1_.assign(n_, 0);
    dead_.clear();
    std::vector<std::vector<Vertex>> paths;
    for (std::uint32_t r : roots) {
      if (used0_[r]) continue;
      path_.assign(1, Vertex::left(r));
      on0_[r] = 1;
      blocked_ = false;
      bool ok = dfs(r, len);
      on0_[r] = 0;
      if (ok) {
        for (Vertex x : path_) (x.is_left() ? used0_ : used1_)[x.index()] = 1;
        paths.push_back(path_);
      }
    }
    return paths;
  }

 private:
  bool dfs(std::uint32_t u, std::int64_t remaining) {
    for (std::uint32_t v : adj_[u]) {
      if (used1_[v]) continue;
      if (on1_[v]) {
        blocked_ = true;
        continue;
      }
      if (remaining == 1) {
        if (free_right_[v]) {
          path_.push_back(Vertex::right(v));
          return true;
        }
        continue;
      }
      if (free_right_[v]) continue;
      std::uint32_t w = back_[v];
      if (w == kNone || used0_[w]) continue;
      if (on0_[w]) {
        blocked_ = true;
        continue;
      }
      std::uint64_t key = (static_cast<std::uint64_t>(v) << 32) | static_cast<std::uint64_t>(remaining);
      if (dead_.count(key)) continue;
      bool outer_blocked = blocked_;
      blocked_ = false;
      on1_[v] = on0_[w] = 1;
      path_.push_back(Vertex::right(v));
      path_.push_back(Vertex::left(w));
      if (dfs(w, remaining - 2)) return true;
      path_.pop_back();
      path_.pop_back();
      on1_[v] = on0_[w] = 0;
      if (!blocked_) dead_.insert(key);
      blocked_ = blocked_ || outer_blocked;
    }
    return false;
  }

  std::size_t n_;
  const std::vector<std::vector<std::uint32_t>>& adj_;
  const std::vector<std::uint32_t>& back_;
  const std::vector<char>& free_right_;
  std::vector<char> used0_, used1_, on0_, on1_;
  std::unordered_set<std::uint64_t> dead_;
  std::vector<Vertex> path_;
  bool blocked_ = false;
};

}  // namespace

MatchingPtr MatchingEngine::augment_eligible(const PotentialOracle& phi, const MatchingPtr& m_in,
                                             std::int64_t k, double gamma, double epsilon,
                                             const IntegerCosts& c) {
  require(m_in != nullptr, "null input matching");
  require(k >= 1, "k must be >= 1");
  require(gamma > 0 && gamma < 1, "gamma must be in (0, 1)");
  require(epsilon > 0, "epsilon must be positive");
  const std::size_t n = m_in->n();
  const bool sampled = backend_.kind == BackendKind::Sampled;
  Meter meter(stats_, budget(n), sampled);
  EligibilityView view(c, phi, *m_in);

  std::vector<std::uint32_t> free_left;
  std::vector<char> free_right(n, 0);
  std::vector<std::uint32_t> back(n, kNone);  // V1 vertex -> mate, if the matched edge is eligible
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!m_in->mate(Vertex::left(i))) free_left.push_back(i);
    Mate w = m_in->mate(Vertex::right(i));
    if (!w) {
      free_right[i] = 1;
    } else if (view.eligible_matched(w->index(), i)) {
      back[i] = w->index();
    }
  }
  if (free_left.empty()) return nullptr;
  const double need = gamma * static_cast<double>(n) / static_cast<double>(k);
  const std::int64_t max_len = std::min<std::int64_t>(k, 2 * static_cast<std::int64_t>(n) - 1);

  if (!sampled) {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::uint32_t u = 0; u < n; ++u)
      for (std::uint32_t v = 0; v < n; ++v) {
        meter.charge();
        if (view.eligible_nonmatched(u, v)) adj[u].push_back(v);
      }
    ExactPathSearch search(n, adj, back, free_right);
    for (std::int64_t len = 1; len <= max_len; len += 2) {
      auto paths = search.run(free_left, len);
      if (!paths.empty() && static_cast<double>(paths.size()) >= need)
        return std::make_shared<AugmentedMatching>(m_in, paths);
    }
    return nullptr;
  }

  // Sampled: the same search, but each V0 vertex probes a random sample of V1 vertices.
  std::vector<std::uint32_t> order = free_left;
  std::shuffle(order.begin(), order.end(), rng_);
  const std::uint64_t probes =
      std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(n)))));
  for (std::int64_t len = 1; len <= max_len; len += 2) {
    std::vector<char> used0(n, 0), used1(n, 0), on0(n, 0), on1(n, 0);
    std::vector<std::vector<Vertex>> paths;
    std::vector<Vertex> path;
    std::function<bool(std::uint32_t, std::int64_t)> dfs = [&](std::uint32_t u,
                                                             std::int64_t remaining) -> bool {
      for (std::uint64_t q = 0; q < probes; ++q) {
        if (!meter.charge()) return false;
        auto v = static_cast<std::uint32_t>(uniform_below(rng_, n));
        if (used1[v] || on1[v]) continue;
        if (remaining == 1 ? !free_right[v] : free_right[v]) continue;
        if (!view.eligible_nonmatched(u, v)) continue;
        if (remaining == 1) {
          path.push_back(Vertex::right(v));
          return true;
        }
        std::uint32_t w = back[v];
        if (w == kNone || used0[w] || on0[w]) continue;
        on1[v] = on0[w] = 1;
        path.push_back(Vertex::right(v));
        path.push_back(Vertex::left(w));
        if (dfs(w, remaining - 2)) return true;
        path.pop_back();
        path.pop_back();
        on1[v] = on0[w] = 0;
      }
      return false;
    };
    for (std::uint32_t r : order) {
      if (meter.exhausted()) break;
      path.assign(1, Vertex::left(r));
      on0[r] = 1;
      bool ok = dfs(r, len);
      on0[r] = 0;
      if (ok) {
        for (Vertex x : path) (x.is_left() ? used0 : used1)[x.index()] = 1;
        paths.push_back(path);
      }
    }
    if (!paths.empty() && static_cast<double>(paths.size()) >= need)
      return std::make_shared<AugmentedMatching>(m_in, paths);
    if (meter.exhausted()) break;
  }
  return nullptr;
}

}  // namespace submatch
