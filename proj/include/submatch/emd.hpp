#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "submatch/instance.hpp"
#include "submatch/mcm.hpp"
#include "submatch/pipeline.hpp"
#include "submatch/rng.hpp"

namespace submatch {

// Square table d(p, q) over point ids 0..k-1 with values in [0, 1]; no metric axioms assumed.
class MetricTable {
 public:
  MetricTable(std::size_t k, std::vector<double> row_major);
  static std::shared_ptr<const MetricTable> load(const std::string& path);

  std::size_t points() const { return k_; }
  double operator()(std::uint32_t p, std::uint32_t q) const;
  const std::vector<double>& data() const { return d_; }

 private:
  std::size_t k_;
  std::vector<double> d_;
};

// Sample access to a distribution over the points of a metric table.
class DistributionSource {
 public:
  explicit DistributionSource(std::shared_ptr<const MetricTable> metric, std::size_t support_bound);
  virtual ~DistributionSource() = default;

  // One draw; counted.
  std::uint32_t draw(Rng& rng);
  double metric(std::uint32_t p, std::uint32_t q) const { return (*metric_)(p, q); }
  const std::shared_ptr<const MetricTable>& metric_table() const { return metric_; }
  std::size_t support_bound() const { return support_bound_; }
  std::uint64_t draws() const { return draws_; }

 protected:
  virtual std::uint32_t next(Rng& rng) = 0;

 private:
  std::shared_ptr<const MetricTable> metric_;
  std::size_t support_bound_;
  std::uint64_t draws_ = 0;
};

// In-memory {point, mass} list; masses are normalized on construction.
class DiscreteDistribution final : public DistributionSource {
 public:
  DiscreteDistribution(std::shared_ptr<const MetricTable> metric, std::vector<std::uint32_t> points,
                       std::vector<double> masses);
  // Mass vector over all points of the metric table.
  std::vector<double> dense_masses() const;

 protected:
  std::uint32_t next(Rng& rng) override;

 private:
  std::vector<std::uint32_t> points_;
  std::vector<double> masses_;
  std::vector<double> cumulative_;
};

// Replays whitespace-separated point ids from a file; running out of ids is an error.
class StreamDistribution final : public DistributionSource {
 public:
  StreamDistribution(std::shared_ptr<const MetricTable> metric, const std::string& path,
                     std::size_t support_bound);

 protected:
  std::uint32_t next(Rng& rng) override;

 private:
  std::string path_;
  std::ifstream in_;
};

struct EmpiricalPair {
  std::vector<std::uint32_t> mu_points;
  std::vector<std::uint32_t> nu_points;
  std::shared_ptr<const MetricTable> metric;
  std::size_t m() const { return mu_points.size(); }
  // m x m cost oracle d(mu_points[i], nu_points[j]).
  BipartiteInstance instance() const;
};

// m = ceil(4 n ln max(n, 2)).
std::size_t empirical_size(std::size_t n);
// Total draws 2m.
std::uint64_t sample_complexity(std::size_t n);

EmpiricalPair sample_empirical(DistributionSource& mu, DistributionSource& nu, std::size_t n,
                               std::uint64_t seed);

struct EmdEstimate {
  double estimate = 0;
  std::size_t m = 0;
  std::uint64_t draws = 0;
  MwmEstimate mwm;
};

// Runs the matching estimator on the empirical pair with alpha = 1 - gamma / 5, beta = 1.
EmdEstimate estimate_emd(DistributionSource& mu, DistributionSource& nu, std::size_t n, double gamma,
                         const Backend& backend, const PipelineOptions& options = {});

}  // namespace submatch
