#include <doctest.h>

#include "helpers.hpp"
#include "submatch/baseline.hpp"
#include "submatch/error.hpp"
#include "submatch/generators.hpp"
#include "submatch/io.hpp"
#include "submatch/rng.hpp"

using namespace submatch;
using namespace testing;
namespace bl = submatch::baseline;

namespace {

std::vector<double> dense_of(const CostFunction& fn) {
  const std::size_t n = fn.size();
  std::vector<double> d(n * n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) d[u * n + v] = fn.at(u, v);
  return d;
}

}  // namespace

TEST_CASE("exact k-matching examples") {
  std::vector<double> cheap(16, 10.0);
  for (std::size_t i = 0; i < 4; ++i) cheap[i * 4 + i] = 1.0;
  CHECK(bl::exact_min_weight_k_matching(cheap, 4, 4).value == doctest::Approx(4.0));

  std::vector<double> m3{1, 2, 3, 2, 1, 3, 3, 3, 1};
  auto r = bl::exact_min_weight_k_matching(m3, 3, 3);
  CHECK(r.value == doctest::Approx(3.0));
  CHECK(r.witness.size() == 3);

  auto z = bl::exact_min_weight_k_matching(m3, 3, 0);
  CHECK(z.value == 0.0);
  CHECK(z.witness.empty());
  CHECK_THROWS_AS(bl::exact_min_weight_k_matching(m3, 3, 4), Error);
}

TEST_CASE("exact k-matching agrees with an assignment solver") {
  // Reference values from an independent Hungarian-method solver on the same matrices.
  auto u60 = std::make_shared<UniformCosts>(60, 7);
  CHECK(bl::exact_min_weight_k_matching(dense_of(*u60), 60, 60).value == doctest::Approx(1.752898159777).epsilon(1e-9));
  auto u40 = dense_of(UniformCosts(40, 8));
  auto by = bl::min_cost_by_size(u40, 40);
  REQUIRE(by.size() == 41);
  CHECK(by[10] == doctest::Approx(0.052366098776).epsilon(1e-9));
  CHECK(by[30] == doctest::Approx(0.603128921276).epsilon(1e-9));
  CHECK(by[34] == doctest::Approx(0.860092442941).epsilon(1e-9));
  CHECK(bl::exact_min_weight_k_matching(u40, 40, 30).value == doctest::Approx(by[30]));
}

TEST_CASE("exact perfect matching equals the permutation minimum, with non-edges") {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 7);
    std::vector<double> c(n * n);
    for (auto& x : c) x = uniform01(rng) < 0.3 ? bl::kNonEdge : std::floor(uniform01(rng) * 20) + 1;
    double brute = brute_force_perfect(c, n);
    auto by = bl::min_cost_by_size(c, n);
    if (std::isinf(brute)) {
      CHECK(by.size() <= n);
      CHECK_THROWS_AS(bl::exact_min_weight_k_matching(c, n, n), Error);
    } else {
      REQUIRE(by.size() == n + 1);
      CHECK(by[n] == doctest::Approx(brute));
      // Every size has a verified certificate.
      for (std::size_t k = 0; k <= n; ++k) CHECK(bl::exact_min_weight_k_matching(c, n, k).value == doctest::Approx(by[k]));
    }
  }
}

TEST_CASE("certificates are checked") {
  std::vector<double> m3{1, 2, 3, 2, 1, 3, 3, 3, 1};
  auto r = bl::exact_min_weight_k_matching(m3, 3, 2);
  CHECK_NOTHROW(bl::verify_certificate(m3, 3, 2, r));
  auto tampered = r;
  tampered.lambda += 1;
  CHECK_THROWS_AS(bl::verify_certificate(m3, 3, 2, tampered), Error);
  auto wrong = r;
  wrong.witness[0].second = (wrong.witness[0].second + 1) % 3;
  CHECK_THROWS_AS(bl::verify_certificate(m3, 3, 2, wrong), Error);
}

TEST_CASE("baseline size cap") {
  std::vector<double> big(2001 * 2001, 1.0);
  CHECK_THROWS_AS(bl::exact_min_weight_k_matching(big, 2001, 1), Error);
}

TEST_CASE("exact EMD examples") {
  std::vector<double> mu{0.25, 0.75}, d{0, 1, 1, 0};
  CHECK(bl::exact_emd(mu, mu, d) == doctest::Approx(0.0));
  CHECK(bl::exact_emd({1.0}, {1.0}, {0.7}) == doctest::Approx(0.7));
  // mu uniform on {a, b}, nu = delta_a, d(a, b) = 1.
  CHECK(bl::exact_emd({0.5, 0.5}, {1.0}, {0.0, 1.0}) == doctest::Approx(0.5));
  // Reference value from an LP solver.
  CHECK(bl::exact_emd({0.2, 0.5, 0.3}, {0.6, 0.4}, {0.1, 0.9, 0.4, 0.2, 0.7, 0.3}) == doctest::Approx(0.29).epsilon(1e-9));
  CHECK(bl::exact_emd({0.26980599999999999, 0.14629, 0.27930100000000002, 0.023127000000000002, 0.173763,
                       0.10771299999999995},
                      {0.243427, 0.052979999999999999, 0.26459500000000002, 0.16511999999999999,
                       0.27387800000000007},
                      {0.4772, 0.4305, 0.7889, 0.9842, 0.3697, 0.9689, 0.929,  0.1777, 0.6089, 0.7049,
                       0.9428, 0.6657, 0.1334, 0.4979, 0.4936, 0.5002, 0.9586, 0.3499, 0.2238, 0.5221,
                       0.6412, 0.9391, 0.582,  0.2678, 0.9298, 0.4917, 0.6758, 0.476,  0.217,  0.6926}) ==
        doctest::Approx(0.3496793229).epsilon(1e-9));
  CHECK_THROWS_AS(bl::exact_emd({0.5, 0.6}, {1.0}, {0, 1}), Error);
}

TEST_CASE("exact EMD on uniform empirical distributions equals the matching cost over m") {
  Rng rng(5);
  const std::size_t m = 12;
  std::vector<double> c(m * m);
  for (auto& x : c) x = uniform01(rng);
  std::vector<double> w(m, 1.0 / m);
  CHECK(bl::exact_emd(w, w, c) == doctest::Approx(bl::exact_min_weight_k_matching(c, m, m).value / m).epsilon(1e-9));
}

TEST_CASE("minimum vertex cover examples") {
  CHECK(bl::min_vertex_cover_bipartite(4, {}).empty());
  std::vector<bl::Edge> perfect{{0, 0}, {1, 1}, {2, 2}};
  CHECK(bl::min_vertex_cover_bipartite(3, perfect).size() == 3);
  std::vector<bl::Edge> star{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}};
  auto cover = bl::min_vertex_cover_bipartite(5, star);
  REQUIRE(cover.size() == 1);
  CHECK(cover[0] == Vertex::left(0));
  // Cover property on random graphs, size equals the maximum matching.
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<bl::Edge> e;
    for (std::uint32_t u = 0; u < 8; ++u)
      for (std::uint32_t v = 0; v < 8; ++v)
        if (uniform01(rng) < 0.2) e.emplace_back(u, v);
    auto vc = bl::min_vertex_cover_bipartite(8, e);
    CHECK(vc.size() == bl::max_matching_size(8, e));
    for (auto [u, v] : e) {
      bool covered = std::find(vc.begin(), vc.end(), Vertex::left(u)) != vc.end() ||
                     std::find(vc.begin(), vc.end(), Vertex::right(v)) != vc.end();
      CHECK(covered);
    }
  }
}

TEST_CASE("max edge after dropping the most expensive edges") {
  std::vector<double> c{1, 9, 9, 2};
  std::vector<bl::Edge> m{{0, 0}, {1, 1}};
  CHECK(bl::max_edge_after_drop(c, 2, m, 0) == 2.0);
  CHECK(bl::max_edge_after_drop(c, 2, m, 1) == 1.0);
  CHECK(bl::max_edge_after_drop(c, 2, m, 2) == 0.0);
}
