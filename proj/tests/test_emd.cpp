#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "submatch/baseline.hpp"
#include "submatch/emd.hpp"
#include "submatch/error.hpp"

using namespace submatch;

namespace {

std::shared_ptr<const MetricTable> line_metric(std::size_t k) {
  std::vector<double> d(k * k);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < k; ++q)
      d[p * k + q] = std::abs(static_cast<double>(p) - static_cast<double>(q)) / static_cast<double>(k - 1);
  return std::make_shared<MetricTable>(k, d);
}

std::vector<std::uint32_t> ids(std::size_t k) {
  std::vector<std::uint32_t> v(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = static_cast<std::uint32_t>(i);
  return v;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("submatch_test_" + name)).string();
}

// Exact EMD between the two empirical measures of a sampled pair.
double empirical_emd(const EmpiricalPair& pair) {
  const std::size_t k = pair.metric->points();
  std::vector<double> mu(k, 0), nu(k, 0);
  for (auto p : pair.mu_points) mu[p] += 1.0 / static_cast<double>(pair.m());
  for (auto p : pair.nu_points) nu[p] += 1.0 / static_cast<double>(pair.m());
  return baseline::exact_emd(mu, nu, pair.metric->data());
}

Backend exact_backend(std::uint64_t seed) { return Backend{BackendKind::Exact, seed, 0.3}; }

}  // namespace

TEST_CASE("sample complexity") {
  CHECK(empirical_size(1) == 3);
  CHECK(empirical_size(10) == 93);
  CHECK(sample_complexity(100) == 3686);
  CHECK_THROWS_AS(empirical_size(0), Error);
}

TEST_CASE("metric table validation") {
  CHECK_THROWS_AS(MetricTable(2, {0, 1, 1}), Error);
  try {
    MetricTable(1, {1.5});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedCost);
  }
  MetricTable t(2, {0, 0.5, 0.5, 0});
  CHECK(t(0, 1) == 0.5);
  CHECK_THROWS_AS(t(2, 0), Error);
}

TEST_CASE("discrete distribution") {
  auto m = line_metric(4);
  DiscreteDistribution d(m, {1, 3}, {1, 3});
  auto dense = d.dense_masses();
  CHECK(dense[0] == 0.0);
  CHECK(dense[1] == doctest::Approx(0.25));
  CHECK(dense[3] == doctest::Approx(0.75));
  Rng rng(1);
  int threes = 0;
  for (int i = 0; i < 4000; ++i) {
    auto p = d.draw(rng);
    CHECK((p == 1 || p == 3));
    threes += p == 3;
  }
  CHECK(d.draws() == 4000);
  CHECK(threes / 4000.0 == doctest::Approx(0.75).epsilon(0.05));
  CHECK_THROWS_AS(DiscreteDistribution(m, {4}, {1}), Error);
  CHECK_THROWS_AS(DiscreteDistribution(m, {0}, {0}), Error);
  CHECK_THROWS_AS(DiscreteDistribution(m, {0, 1}, {1}), Error);
}

TEST_CASE("empirical multiplicities follow the binomial law") {
  // For n = 10 uniform points and m = 93 draws, P(count in [7, 11]) = 0.6158 per point.
  auto m = line_metric(10);
  DiscreteDistribution mu(m, ids(10), std::vector<double>(10, 1.0));
  DiscreteDistribution nu(m, ids(10), std::vector<double>(10, 1.0));
  std::size_t inside = 0, total = 0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    EmpiricalPair pair = sample_empirical(mu, nu, 10, trial);
    REQUIRE(pair.m() == 93);
    std::vector<int> count(10, 0);
    for (auto p : pair.mu_points) ++count[p];
    for (int c : count) {
      inside += c >= 7 && c <= 11;
      ++total;
    }
  }
  CHECK(static_cast<double>(inside) / static_cast<double>(total) == doctest::Approx(0.6158).epsilon(0.05));
  CHECK(mu.draws() == 93000);
}

TEST_CASE("sources must share a metric table") {
  DiscreteDistribution a(line_metric(3), {0}, {1});
  DiscreteDistribution b(line_metric(3), {0}, {1});
  CHECK_THROWS_AS(sample_empirical(a, b, 3, 0), Error);
}

TEST_CASE("stream distribution replays ids") {
  auto m = line_metric(3);
  const std::string path = temp_path("stream.txt");
  {
    std::ofstream out(path);
    out << "0 2\n1\n";
  }
  StreamDistribution s(m, path, 3);
  Rng rng(0);
  CHECK(s.draw(rng) == 0);
  CHECK(s.draw(rng) == 2);
  CHECK(s.draw(rng) == 1);
  CHECK_THROWS_AS(s.draw(rng), Error);
  CHECK(s.draws() == 3);
  {
    std::ofstream out(path);
    out << "7\n";
  }
  StreamDistribution bad(m, path, 3);
  CHECK_THROWS_AS(bad.draw(rng), Error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(StreamDistribution(m, temp_path("missing.txt"), 3), Error);
}

TEST_CASE("emd of two point masses is their distance") {
  auto m = line_metric(5);
  for (std::uint32_t q : {0u, 2u, 4u}) {
    DiscreteDistribution mu(m, {0}, {1});
    DiscreteDistribution nu(m, {q}, {1});
    auto e = estimate_emd(mu, nu, 5, 0.3, exact_backend(q));
    CHECK(e.m == 33);
    CHECK(e.draws == 66);
    CHECK(std::abs(e.estimate - (*m)(0, q)) <= 0.3);
  }
}

TEST_CASE("emd of a distribution with itself is small") {
  auto m = line_metric(6);
  std::vector<double> masses{0.3, 0.1, 0.2, 0.1, 0.2, 0.1};
  DiscreteDistribution mu(m, ids(6), masses);
  DiscreteDistribution nu(m, ids(6), masses);
  auto e = estimate_emd(mu, nu, 6, 0.3, exact_backend(3));
  EmpiricalPair pair = sample_empirical(mu, nu, 6, derive_seed(3, "emd-sample"));
  CHECK(e.estimate >= 0);
  CHECK(e.estimate <= empirical_emd(pair) + 0.3);
}
