#include "submatch/emd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "submatch/error.hpp"
#include "submatch/io.hpp"

namespace submatch {
namespace {

class EmpiricalCosts final : public CostFunction {
 public:
  explicit EmpiricalCosts(EmpiricalPair pair) : pair_(std::move(pair)) {}
  std::size_t size() const override { return pair_.m(); }
  double at(std::size_t u, std::size_t v) const override {
    return (*pair_.metric)(pair_.mu_points[u], pair_.nu_points[v]);
  }
  std::string name() const override { return "empirical"; }

 private:
  EmpiricalPair pair_;
};

}  // namespace

MetricTable::MetricTable(std::size_t k, std::vector<double> row_major)
    : k_(k), d_(std::move(row_major)) {
  require(k_ >= 1, "metric table needs at least one point");
  require(d_.size() == k_ * k_, "metric table must be k x k");
  for (double x : d_)
    if (!(x >= 0 && x <= 1)) fail(ErrorCode::MalformedCost, "metric values must lie in [0, 1]");
}

std::shared_ptr<const MetricTable> MetricTable::load(const std::string& path) {
  CostMatrixData data = read_cost_matrix(path);
  return std::make_shared<MetricTable>(data.n, std::move(data.costs));
}

double MetricTable::operator()(std::uint32_t p, std::uint32_t q) const {
  if (p >= k_ || q >= k_) fail(ErrorCode::OutOfRange, "point id outside the metric table");
  return d_[static_cast<std::size_t>(p) * k_ + q];
}

DistributionSource::DistributionSource(std::shared_ptr<const MetricTable> metric,
                                       std::size_t support_bound)
    : metric_(std::move(metric)), support_bound_(support_bound) {
  require(metric_ != nullptr, "null metric table");
  require(support_bound_ >= 1, "support bound must be >= 1");
}

std::uint32_t DistributionSource::draw(Rng& rng) {
  std::uint32_t p = next(rng);
  if (p >= metric_->points()) fail(ErrorCode::OutOfRange, "drawn point outside the metric table");
  ++draws_;
  return p;
}

DiscreteDistribution::DiscreteDistribution(std::shared_ptr<const MetricTable> metric,
                                           std::vector<std::uint32_t> points,
                                           std::vector<double> masses)
    : DistributionSource(std::move(metric), std::max<std::size_t>(1, points.size())),
      points_(std::move(points)), masses_(std::move(masses)) {
  require(!points_.empty() && points_.size() == masses_.size(), "need one mass per point");
  double total = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    require(points_[i] < metric_table()->points(), "point id outside the metric table");
    require(std::isfinite(masses_[i]) && masses_[i] >= 0, "masses must be finite and >= 0");
    total += masses_[i];
  }
  require(total > 0, "total mass must be positive");
  for (double& m : masses_) m /= total;
  cumulative_.resize(masses_.size());
  std::partial_sum(masses_.begin(), masses_.end(), cumulative_.begin());
}

std::vector<double> DiscreteDistribution::dense_masses() const {
  std::vector<double> out(metric_table()->points(), 0.0);
  for (std::size_t i = 0; i < points_.size(); ++i) out[points_[i]] += masses_[i];
  return out;
}

std::uint32_t DiscreteDistribution::next(Rng& rng) {
  double x = uniform01(rng) * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
  std::size_t i = std::min<std::size_t>(it - cumulative_.begin(), points_.size() - 1);
  while (masses_[i] == 0 && i > 0) --i;
  return points_[i];
}

StreamDistribution::StreamDistribution(std::shared_ptr<const MetricTable> metric,
                                       const std::string& path, std::size_t support_bound)
    : DistributionSource(std::move(metric), support_bound), path_(path), in_(path) {
  if (!in_) fail(ErrorCode::Io, "cannot open " + path);
}

std::uint32_t StreamDistribution::next(Rng&) {
  long long id = 0;
  if (!(in_ >> id)) fail(ErrorCode::Io, "out of draws in " + path_);
  if (id < 0) fail(ErrorCode::Format, "negative point id in " + path_);
  return static_cast<std::uint32_t>(id);
}

BipartiteInstance EmpiricalPair::instance() const {
  return BipartiteInstance(std::make_shared<EmpiricalCosts>(*this));
}

std::size_t empirical_size(std::size_t n) {
  require(n >= 1, "n must be >= 1");
  double nn = static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(4 * nn * std::log(std::max(nn, 2.0)) - 1e-9));
}

std::uint64_t sample_complexity(std::size_t n) { return 2 * empirical_size(n); }

EmpiricalPair sample_empirical(DistributionSource& mu, DistributionSource& nu, std::size_t n,
                               std::uint64_t seed) {
  require(mu.metric_table() == nu.metric_table(), "sources must share a metric table");
  const std::size_t m = empirical_size(n);
  EmpiricalPair pair;
  pair.metric = mu.metric_table();
  Rng rm(derive_seed(seed, "emd-mu")), rn(derive_seed(seed, "emd-nu"));
  pair.mu_points.reserve(m);
  pair.nu_points.reserve(m);
  for (std::size_t i = 0; i < m; ++i) pair.mu_points.push_back(mu.draw(rm));
  for (std::size_t i = 0; i < m; ++i) pair.nu_points.push_back(nu.draw(rn));
  return pair;
}

EmdEstimate estimate_emd(DistributionSource& mu, DistributionSource& nu, std::size_t n, double gamma,
                         const Backend& backend, const PipelineOptions& options) {
  require(gamma > 0 && gamma < 1, "gamma must be in (0, 1)");
  const std::uint64_t d0 = mu.draws() + nu.draws();
  EmpiricalPair pair = sample_empirical(mu, nu, n, derive_seed(backend.seed, "emd-sample"));
  EmdEstimate out;
  out.m = pair.m();
  out.draws = mu.draws() + nu.draws() - d0;
  const double g = gamma / 5;
  ReductionConfig cfg = ReductionConfig::for_window(1 - g, 1);
  Backend b = backend;
  b.seed = derive_seed(backend.seed, "emd-estimate");
  PipelineOptions opt = options;
  if (opt.mode == ParameterMode::Practical && opt.unit <= 0) {
    // Costs lie in [0, 1]: a gamma / 4 grid, with enough iterations to reach cost 1.
    opt.unit = gamma / 4;
    opt.T = std::max<std::int64_t>(opt.T, static_cast<std::int64_t>(std::ceil(4 / gamma - 1e-9)) + 2);
  }
  out.mwm = estimate_min_weight_matching(pair.instance(), cfg, b, opt);
  out.estimate = out.mwm.estimate / static_cast<double>(out.m);
  return out;
}

}  // namespace submatch
