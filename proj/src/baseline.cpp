#include "submatch/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include "submatch/error.hpp"

namespace submatch::baseline {
namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
constexpr std::uint32_t kNone = UINT32_MAX;

std::vector<std::int64_t> scale_costs(const std::vector<double>& costs, std::size_t n) {
  require(n > 0 && n <= kMaxBaselineN, "baseline supports 1 <= n <= 2000");
  require(costs.size() == n * n, "cost matrix must have n*n entries");
  std::vector<std::int64_t> out(costs.size());
  for (std::size_t i = 0; i < costs.size(); ++i) {
    double c = costs[i];
    if (std::isinf(c) && c > 0) {
      out[i] = kInf;
      continue;
    }
    if (!std::isfinite(c) || c < 0 || c > 1e6) fail(ErrorCode::OutOfRange, "baseline cost out of range");
    out[i] = std::llround(c / kCostResolution);
  }
  return out;
}

// Successive shortest paths on s -> V0 -> V1 -> t with Johnson potentials.
// Node layout: 0 = s, 1..n = V0, n+1..2n = V1, 2n+1 = t.
class SspSolver {
 public:
  SspSolver(std::vector<std::int64_t> c, std::size_t n)
      : c_(std::move(c)), n_(n), pot_(2 * n + 2, 0), lmate_(n, kNone), rmate_(n, kNone) {}

  // One augmentation; false if t is unreachable.
  bool augment() {
    const std::size_t nodes = 2 * n_ + 2, s = 0, t = 2 * n_ + 1;
    std::vector<std::int64_t> dist(nodes, kInf);
    std::vector<std::size_t> prev(nodes, SIZE_MAX);
    std::vector<char> done(nodes, 0);
    dist[s] = 0;
    for (;;) {
      std::size_t x = SIZE_MAX;
      for (std::size_t i = 0; i < nodes; ++i)
        if (!done[i] && dist[i] < kInf && (x == SIZE_MAX || dist[i] < dist[x])) x = i;
      if (x == SIZE_MAX) break;
      done[x] = 1;
      auto relax = [&](std::size_t y, std::int64_t cost) {
        std::int64_t d = dist[x] + cost + pot_[x] - pot_[y];
        if (d < dist[y]) {
          dist[y] = d;
          prev[y] = x;
        }
      };
      if (x == s) {
        for (std::size_t u = 0; u < n_; ++u)
          if (lmate_[u] == kNone) relax(1 + u, 0);
      } else if (x <= n_) {
        std::size_t u = x - 1;
        for (std::size_t v = 0; v < n_; ++v) {
          std::int64_t cost = c_[u * n_ + v];
          if (cost >= kInf || lmate_[u] == v) continue;
          relax(1 + n_ + v, cost);
        }
      } else if (x < t) {
        std::size_t v = x - 1 - n_;
        if (rmate_[v] == kNone)
          relax(t, 0);
        else
          relax(1 + rmate_[v], -c_[rmate_[v] * n_ + v]);
      } else {
        // Residual arcs t -> V1 on matched vertices keep the potentials valid everywhere.
        for (std::size_t v = 0; v < n_; ++v)
          if (rmate_[v] != kNone) relax(1 + n_ + v, 0);
      }
    }
    if (dist[t] >= kInf) return false;
    std::int64_t reach = 0;
    for (std::size_t i = 0; i < nodes; ++i)
      if (dist[i] < kInf) reach = std::max(reach, dist[i]);
    for (std::size_t i = 0; i < nodes; ++i) pot_[i] += dist[i] < kInf ? dist[i] : reach;
    std::size_t y = t;
    while (y != s) {
      std::size_t x = prev[y];
      if (x >= 1 && x <= n_ && y > n_ && y < t) {
        lmate_[x - 1] = static_cast<std::uint32_t>(y - 1 - n_);
        rmate_[y - 1 - n_] = static_cast<std::uint32_t>(x - 1);
      }
      y = x;
    }
    ++size_;
    return true;
  }

  double matched_value(const std::vector<double>& costs) const {
    double total = 0;
    for (std::size_t u = 0; u < n_; ++u)
      if (lmate_[u] != kNone) total += costs[u * n_ + lmate_[u]];
    return total;
  }

  ExactResult result() const {
    ExactResult r;
    for (std::uint32_t u = 0; u < n_; ++u)
      if (lmate_[u] != kNone) r.witness.emplace_back(u, lmate_[u]);
    const std::size_t t = 2 * n_ + 1;
    r.lambda = pot_[t] - pot_[0];
    r.row_dual.resize(n_);
    r.col_dual.resize(n_);
    for (std::size_t u = 0; u < n_; ++u) r.row_dual[u] = std::max<std::int64_t>(0, pot_[1 + u] - pot_[0]);
    for (std::size_t v = 0; v < n_; ++v) r.col_dual[v] = std::max<std::int64_t>(0, pot_[t] - pot_[1 + n_ + v]);
    return r;
  }

  std::size_t size() const { return size_; }

 private:
  std::vector<std::int64_t> c_;
  std::size_t n_;
  std::vector<std::int64_t> pot_;
  std::vector<std::uint32_t> lmate_, rmate_;
  std::size_t size_ = 0;
};

}  // namespace

ExactResult exact_min_weight_k_matching(const std::vector<double>& costs, std::size_t n,
                                        std::size_t k) {
  if (k > n) fail(ErrorCode::InvalidArgument, "k exceeds n");
  SspSolver solver(scale_costs(costs, n), n);
  for (std::size_t j = 0; j < k; ++j)
    if (!solver.augment()) fail(ErrorCode::InvalidArgument, "no matching of the requested size exists");
  ExactResult r = solver.result();
  r.value = solver.matched_value(costs);
  if (k == 0) {
    r.lambda = 0;
    std::fill(r.row_dual.begin(), r.row_dual.end(), 0);
    std::fill(r.col_dual.begin(), r.col_dual.end(), 0);
  }
  verify_certificate(costs, n, k, r);
  return r;
}

ExactResult exact_min_weight_k_matching(const BipartiteInstance& instance, std::size_t k) {
  require(instance.size() <= kMaxBaselineN, "baseline supports n <= 2000");
  return exact_min_weight_k_matching(materialize(instance), instance.size(), k);
}

std::vector<double> min_cost_by_size(const std::vector<double>& costs, std::size_t n) {
  SspSolver solver(scale_costs(costs, n), n);
  std::vector<double> out{0.0};
  while (solver.augment()) out.push_back(solver.matched_value(costs));
  return out;
}

void verify_certificate(const std::vector<double>& costs, std::size_t n, std::size_t k,
                        const ExactResult& r) {
  std::vector<std::int64_t> c = scale_costs(costs, n);
  auto bad = [](const char* what) { fail(ErrorCode::Internal, std::string("certificate: ") + what); };
  if (r.witness.size() != k) bad("witness has wrong size");
  std::vector<char> lm(n, 0), rm(n, 0);
  std::int64_t primal = 0;
  for (auto [u, v] : r.witness) {
    if (u >= n || v >= n || lm[u] || rm[v]) bad("witness is not a matching");
    lm[u] = rm[v] = 1;
    if (c[u * n + v] >= kInf) bad("witness uses a non-edge");
    primal += c[u * n + v];
    if (r.lambda - r.row_dual[u] - r.col_dual[v] != c[u * n + v]) bad("witness edge not tight");
  }
  std::int64_t dual = static_cast<std::int64_t>(k) * r.lambda;
  for (std::size_t u = 0; u < n; ++u) {
    if (r.row_dual[u] < 0 || (r.row_dual[u] > 0 && !lm[u])) bad("row dual slackness");
    dual -= r.row_dual[u];
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (r.col_dual[v] < 0 || (r.col_dual[v] > 0 && !rm[v])) bad("column dual slackness");
    dual -= r.col_dual[v];
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (c[u * n + v] < kInf && r.lambda - r.row_dual[u] - r.col_dual[v] > c[u * n + v])
        bad("dual infeasible");
  if (dual != primal) bad("duality gap");
}

double exact_emd(const std::vector<double>& mu, const std::vector<double>& nu,
                 const std::vector<double>& metric) {
  const std::size_t a = mu.size(), b = nu.size();
  require(a > 0 && b > 0, "distributions must be nonempty");
  require(metric.size() == a * b, "metric table must be |mu| x |nu|");
  double smu = 0, snu = 0;
  for (double x : mu) {
    require(x >= 0, "masses must be >= 0");
    smu += x;
  }
  for (double x : nu) {
    require(x >= 0, "masses must be >= 0");
    snu += x;
  }
  if (std::abs(smu - 1) > 1e-12 || std::abs(snu - 1) > 1e-12)
    fail(ErrorCode::InvalidArgument, "masses must sum to 1");
  std::vector<std::int64_t> d(a * b);
  for (std::size_t i = 0; i < d.size(); ++i) {
    require(std::isfinite(metric[i]) && metric[i] >= 0 && metric[i] <= 1e6, "metric out of range");
    d[i] = std::llround(metric[i] / kCostResolution);
  }
  // Node layout: 0 = s, 1..a, a+1..a+b, t. Flow on (i, j) is flow[i*b + j].
  const std::size_t nodes = a + b + 2, s = 0, t = a + b + 1;
  std::vector<double> flow(a * b, 0), out_s(a, 0), in_t(b, 0);
  std::vector<std::int64_t> pot(nodes, 0);
  const double eps = 1e-15;
  double sent = 0;
  while (sent < 1 - 1e-12) {
    std::vector<std::int64_t> dist(nodes, kInf);
    std::vector<std::size_t> prev(nodes, SIZE_MAX);
    std::vector<char> done(nodes, 0);
    dist[s] = 0;
    for (;;) {
      std::size_t x = SIZE_MAX;
      for (std::size_t i = 0; i < nodes; ++i)
        if (!done[i] && dist[i] < kInf && (x == SIZE_MAX || dist[i] < dist[x])) x = i;
      if (x == SIZE_MAX) break;
      done[x] = 1;
      auto relax = [&](std::size_t y, std::int64_t cost) {
        std::int64_t nd = dist[x] + cost + pot[x] - pot[y];
        if (nd < dist[y]) {
          dist[y] = nd;
          prev[y] = x;
        }
      };
      if (x == s) {
        for (std::size_t i = 0; i < a; ++i)
          if (mu[i] - out_s[i] > eps) relax(1 + i, 0);
      } else if (x <= a) {
        std::size_t i = x - 1;
        for (std::size_t j = 0; j < b; ++j) relax(1 + a + j, d[i * b + j]);
        if (out_s[i] > eps) relax(s, 0);
      } else if (x < t) {
        std::size_t j = x - 1 - a;
        if (nu[j] - in_t[j] > eps) relax(t, 0);
        for (std::size_t i = 0; i < a; ++i)
          if (flow[i * b + j] > eps) relax(1 + i, -d[i * b + j]);
      }
    }
    if (dist[t] >= kInf) fail(ErrorCode::Internal, "transport network disconnected");
    std::int64_t reach = 0;
    for (std::size_t i = 0; i < nodes; ++i)
      if (dist[i] < kInf) reach = std::max(reach, dist[i]);
    for (std::size_t i = 0; i < nodes; ++i) pot[i] += dist[i] < kInf ? dist[i] : reach;
    double push = 1 - sent;
    for (std::size_t y = t; y != s; y = prev[y]) {
      std::size_t x = prev[y];
      if (x == s) push = std::min(push, mu[y - 1] - out_s[y - 1]);
      else if (y == t) push = std::min(push, nu[x - 1 - a] - in_t[x - 1 - a]);
      else if (x > a && y <= a) push = std::min(push, flow[(y - 1) * b + (x - 1 - a)]);
    }
    if (push <= eps) fail(ErrorCode::Internal, "transport augmentation stalled");
    for (std::size_t y = t; y != s; y = prev[y]) {
      std::size_t x = prev[y];
      if (x == s) out_s[y - 1] += push;
      else if (y == t) in_t[x - 1 - a] += push;
      else if (x <= a) flow[(x - 1) * b + (y - 1 - a)] += push;
      else flow[(y - 1) * b + (x - 1 - a)] -= push;
    }
    sent += push;
  }
  double total = 0;
  for (std::size_t i = 0; i < a * b; ++i) total += flow[i] * metric[i];
  return total;
}

namespace {

struct Kuhn {
  std::size_t n;
  std::vector<std::vector<std::uint32_t>> adj;
  std::vector<std::uint32_t> lmate, rmate;
  std::vector<int> seen;
  int stamp = 0;

  Kuhn(std::size_t n_, const std::vector<Edge>& edges)
      : n(n_), adj(n_), lmate(n_, kNone), rmate(n_, kNone), seen(n_, 0) {
    for (auto [u, v] : edges) {
      require(u < n && v < n, "edge endpoint out of range");
      adj[u].push_back(v);
    }
    for (std::uint32_t u = 0; u < n; ++u) {
      ++stamp;
      try_augment(u);
    }
  }

  bool try_augment(std::uint32_t u) {
    for (std::uint32_t v : adj[u]) {
      if (seen[v] == stamp) continue;
      seen[v] = stamp;
      if (rmate[v] == kNone || try_augment(rmate[v])) {
        lmate[u] = v;
        rmate[v] = u;
        return true;
      }
    }
    return false;
  }
};

}  // namespace

std::size_t max_matching_size(std::size_t n, const std::vector<Edge>& edges) {
  Kuhn k(n, edges);
  std::size_t size = 0;
  for (auto m : k.lmate) size += m != kNone;
  return size;
}

std::vector<Vertex> min_vertex_cover_bipartite(std::size_t n, const std::vector<Edge>& edges) {
  Kuhn k(n, edges);
  // Z: vertices reachable from free V0 vertices by alternating paths.
  std::vector<char> zl(n, 0), zr(n, 0);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t u = 0; u < n; ++u)
    if (k.lmate[u] == kNone && !k.adj[u].empty()) {
      zl[u] = 1;
      queue.push_back(u);
    }
  while (!queue.empty()) {
    std::uint32_t u = queue.back();
    queue.pop_back();
    for (std::uint32_t v : k.adj[u]) {
      if (zr[v] || k.lmate[u] == v) continue;
      zr[v] = 1;
      std::uint32_t w = k.rmate[v];
      if (w != kNone && !zl[w]) {
        zl[w] = 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<Vertex> cover;
  for (std::uint32_t u = 0; u < n; ++u)
    if (!zl[u] && k.lmate[u] != kNone) cover.push_back(Vertex::left(u));
  for (std::uint32_t v = 0; v < n; ++v)
    if (zr[v]) cover.push_back(Vertex::right(v));
  return cover;
}

double max_edge_after_drop(const std::vector<double>& costs, std::size_t n,
                           const std::vector<Edge>& matching, std::size_t drop) {
  std::vector<double> c;
  for (auto [u, v] : matching) c.push_back(costs[u * n + v]);
  std::sort(c.begin(), c.end());
  if (drop >= c.size()) return 0;
  return c[c.size() - 1 - drop];
}

}  // namespace submatch::baseline
