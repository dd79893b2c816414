#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "submatch/submatch.h"

namespace {

using json = nlohmann::ordered_json;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(submatch_status s) {
  if (s != SUBMATCH_OK) throw CliError(submatch_last_error());
}

struct InstanceSpec {
  std::string generator = "uniform";
  std::size_t n = 100;
  std::uint64_t seed = 0;
  std::size_t dim = 2;
  double p = 0.5;
  std::string path;

  json to_json() const {
    json j;
    j["generator"] = generator;
    if (generator == "file") {
      j["path"] = path;
    } else {
      j["n"] = n;
      j["seed"] = seed;
      if (generator == "euclidean") j["dim"] = dim;
      if (generator == "one-two-metric") j["p"] = p;
    }
    return j;
  }
};

struct Instance {
  submatch_instance* h = nullptr;
  explicit Instance(const InstanceSpec& s) {
    if (s.generator == "file")
      check(submatch_instance_load(s.path.c_str(), &h));
    else
      check(submatch_instance_generate(s.generator.c_str(), s.n, s.seed, s.dim, s.p, &h));
  }
  ~Instance() { submatch_instance_free(h); }
  Instance(const Instance&) = delete;
  Instance& operator=(const Instance&) = delete;
};

struct Options {
  InstanceSpec instance;
  submatch_config config{};
  std::string backend = "exact";
  std::string params = "practical";
  bool seed_given = false;
  std::string out;
  bool exact = false;
  bool binary = false;
  double budget = 0;
};

void add_instance_flags(CLI::App* app, InstanceSpec& s, bool with_path) {
  app->add_option("--generator", s.generator, "Instance generator")
      ->check(CLI::IsMember({"uniform", "euclidean", "one-two-metric", "permutation", "file"}));
  app->add_option("--n", s.n, "Vertices per side")->check(CLI::PositiveNumber);
  app->add_option("--instance-seed", s.seed, "Generator seed (defaults to --seed)");
  app->add_option("--dim", s.dim, "Euclidean dimension")->check(CLI::PositiveNumber);
  app->add_option("--p", s.p, "Edge probability for one-two-metric")->check(CLI::Range(0.0, 1.0));
  if (with_path) app->add_option("--instance", s.path, "Cost matrix file (selects the file generator)");
}

void add_run_flags(CLI::App* app, Options& o) {
  app->add_option("--alpha", o.config.alpha, "Lower size fraction");
  app->add_option("--beta", o.config.beta, "Upper size fraction");
  app->add_option("--gamma", o.config.gamma, "Accuracy parameter");
  app->add_option("--xi-pad", o.config.xi_pad, "Padding slack");
  app->add_option("--backend", o.backend, "Matching backend")->check(CLI::IsMember({"exact", "sampled"}));
  app->add_option("--seed", o.config.seed, "Master seed (falls back to SUBMATCH_SEED)");
  app->add_option("--epsilon", o.config.epsilon, "Sampled backend query knob")->check(CLI::Range(0.0, 1.0));
  app->add_option("--params", o.params, "Parameter mode")->check(CLI::IsMember({"paper", "practical"}));
  app->add_option("--T", o.config.T, "Practical iteration count");
  app->add_option("--k", o.config.k, "Practical path length bound");
  app->add_option("--levels", o.config.levels, "Practical rounding levels (0: T - 1)");
  app->add_option("--max-forest-rounds", o.config.max_forest_rounds, "Forest growth cap (0: none)");
  app->add_flag("--timings", o.config.record_timings, "Record stage timings in the report");
  app->add_option("--out", o.out, "Output path (stdout when omitted)");
}

void finalize(CLI::App* app, Options& o) {
  if (app->count("--seed") == 0) {
    if (const char* env = std::getenv("SUBMATCH_SEED")) {
      try {
        std::size_t pos = 0;
        o.config.seed = std::stoull(env, &pos);
        if (pos != std::string(env).size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw CliError(std::string("SUBMATCH_SEED is not an unsigned integer: ") + env);
      }
    }
  }
  if (app->get_option_no_throw("--instance-seed") == nullptr || app->count("--instance-seed") == 0)
    o.instance.seed = o.config.seed;
  if (!o.instance.path.empty()) o.instance.generator = "file";
  if (o.instance.generator == "file" && o.instance.path.empty())
    throw CliError("the file generator needs --instance");
  o.config.backend = o.backend == "sampled" ? SUBMATCH_BACKEND_SAMPLED : SUBMATCH_BACKEND_EXACT;
  o.config.params = o.params == "paper" ? SUBMATCH_PARAMS_PAPER : SUBMATCH_PARAMS_PRACTICAL;
}

json config_json(const std::string& command, const Options& o) {
  json j;
  j["command"] = command;
  j["alpha"] = o.config.alpha;
  j["beta"] = o.config.beta;
  j["gamma"] = o.config.gamma;
  j["xi_pad"] = o.config.xi_pad;
  j["backend"] = o.backend;
  j["seed"] = o.config.seed;
  j["epsilon"] = o.config.epsilon;
  j["params"] = o.params;
  j["T"] = o.config.T;
  j["k"] = o.config.k;
  j["levels"] = o.config.levels;
  j["max_forest_rounds"] = o.config.max_forest_rounds;
  return j;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliError("cannot open " + path);
  f << text << '\n';
  if (!f) throw CliError("cannot write " + path);
}

std::vector<double> costs_by_size(const submatch_instance* h) {
  std::size_t count = 0;
  check(submatch_exact_costs_by_size(h, nullptr, 0, &count));
  std::vector<double> by(count);
  check(submatch_exact_costs_by_size(h, by.data(), by.size(), &count));
  return by;
}

// Exact c(M^f) for f in [0, 1]; infinite when no matching of that size exists.
double exact_at(const std::vector<double>& by, std::size_t n, double f) {
  auto j = static_cast<std::size_t>(std::ceil(f * static_cast<double>(n) - 1e-9));
  return j < by.size() ? by[j] : INFINITY;
}

int cmd_gen(const Options& o) {
  Instance inst(o.instance);
  if (o.out.empty()) throw CliError("gen needs --out");
  check(submatch_instance_save(inst.h, o.out.c_str(), o.binary ? 1 : 0));
  if (o.instance.generator == "euclidean") {
    std::ofstream f(o.out + ".points");
    if (!f) throw CliError("cannot open " + o.out + ".points");
    char buf[64];
    for (int side = 0; side < 2; ++side) {
      std::size_t count = 0, dim = 0;
      check(submatch_instance_points(inst.h, side, nullptr, 0, &count, &dim));
      std::vector<double> pts(count);
      check(submatch_instance_points(inst.h, side, pts.data(), pts.size(), &count, &dim));
      for (std::size_t i = 0; i < count; i += dim) {
        f << side;
        for (std::size_t d = 0; d < dim; ++d) {
          std::snprintf(buf, sizeof buf, " %.17g", pts[i + d]);
          f << buf;
        }
        f << '\n';
      }
    }
  }
  return 0;
}

int cmd_estimate_mwm(const Options& o) {
  Instance inst(o.instance);
  submatch_result* r = nullptr;
  check(submatch_estimate_mwm(inst.h, &o.config, &r));
  json out;
  out["run_config"] = config_json("estimate-mwm", o);
  out["run_config"]["instance"] = o.instance.to_json();
  out["report"] = json::parse(submatch_result_json(r));
  const double est = submatch_result_estimate(r);
  submatch_result_free(r);
  int code = 0;
  if (o.exact) {
    const std::size_t n = submatch_instance_size(inst.h);
    auto by = costs_by_size(inst.h);
    const double lo = exact_at(by, n, o.config.alpha), hi = exact_at(by, n, o.config.beta);
    const bool inside = lo <= est && est <= hi;
    out["exact"] = {{"c_alpha", lo}, {"c_beta", hi}, {"inside", inside}};
    if (!inside && o.config.backend == SUBMATCH_BACKEND_EXACT) code = 2;
  }
  emit(o.out, out.dump(2));
  return code;
}

int cmd_knapsack(const Options& o) {
  Instance inst(o.instance);
  double size = 0, xi = 0;
  check(submatch_knapsack(inst.h, o.budget, &o.config, &size, &xi));
  json out;
  out["run_config"] = config_json("knapsack", o);
  out["run_config"]["instance"] = o.instance.to_json();
  out["run_config"]["budget"] = o.budget;
  out["size_estimate"] = size;
  out["xi"] = xi;
  out["total_queries"] = submatch_instance_queries(inst.h);
  if (o.exact) {
    auto by = costs_by_size(inst.h);
    std::size_t best = 0;
    for (std::size_t j = 0; j < by.size(); ++j)
      if (by[j] <= o.budget) best = j;
    out["exact"] = {{"size", best}};
  }
  emit(o.out, out.dump(2));
  return 0;
}

struct DistFiles {
  std::string metric, mu, nu, mu_stream, nu_stream;
  std::size_t n = 0;
};

// Lines "point mass".
void read_masses(const std::string& path, std::vector<std::uint32_t>& points, std::vector<double>& masses) {
  std::ifstream f(path);
  if (!f) throw CliError("cannot open " + path);
  long long p = 0;
  double m = 0;
  while (f >> p >> m) {
    if (p < 0) throw CliError("negative point id in " + path);
    points.push_back(static_cast<std::uint32_t>(p));
    masses.push_back(m);
  }
  if (!f.eof()) throw CliError("malformed mass list " + path);
  if (points.empty()) throw CliError("empty mass list " + path);
}

int cmd_estimate_emd(const Options& o, const DistFiles& d) {
  submatch_metric* metric = nullptr;
  check(submatch_metric_load(d.metric.c_str(), &metric));
  std::unique_ptr<submatch_metric, void (*)(submatch_metric*)> mg(metric, submatch_metric_free);
  std::vector<std::vector<std::uint32_t>> pts(2);
  std::vector<std::vector<double>> masses(2);
  submatch_distribution* dist[2] = {nullptr, nullptr};
  const std::string* discrete[2] = {&d.mu, &d.nu};
  const std::string* stream[2] = {&d.mu_stream, &d.nu_stream};
  std::size_t support = 0;
  for (int i = 0; i < 2; ++i) {
    if (!discrete[i]->empty() == !stream[i]->empty())
      throw CliError("give exactly one of --mu/--mu-stream and of --nu/--nu-stream");
    if (!discrete[i]->empty()) {
      read_masses(*discrete[i], pts[i], masses[i]);
      support = std::max(support, pts[i].size());
    }
  }
  const std::size_t n = d.n > 0 ? d.n : support;
  if (n == 0) throw CliError("streaming sources need --n");
  for (int i = 0; i < 2; ++i) {
    if (!discrete[i]->empty())
      check(submatch_distribution_discrete(metric, pts[i].size(), pts[i].data(), masses[i].data(), &dist[i]));
    else
      check(submatch_distribution_stream(metric, stream[i]->c_str(), n, &dist[i]));
  }
  std::unique_ptr<submatch_distribution, void (*)(submatch_distribution*)> g0(dist[0], submatch_distribution_free),
      g1(dist[1], submatch_distribution_free);
  double est = 0;
  std::uint64_t draws = 0;
  submatch_result* r = nullptr;
  check(submatch_estimate_emd(dist[0], dist[1], n, &o.config, &est, &draws, &r));
  json out;
  out["run_config"] = config_json("estimate-emd", o);
  out["run_config"]["metric"] = d.metric;
  out["run_config"]["mu"] = d.mu.empty() ? d.mu_stream : d.mu;
  out["run_config"]["nu"] = d.nu.empty() ? d.nu_stream : d.nu;
  out["run_config"]["n"] = n;
  out["estimate"] = est;
  out["draws"] = draws;
  out["report"] = json::parse(submatch_result_json(r));
  submatch_result_free(r);
  if (o.exact) {
    if (d.mu.empty() || d.nu.empty()) throw CliError("--exact needs --mu and --nu mass lists");
    std::ifstream mf(d.metric);
    std::size_t k = 0;
    std::vector<double> table;
    {
      std::string first;
      mf >> first;
      if (first == "SUBM1") throw CliError("--exact reads text metric files only");
      k = std::stoull(first);
      table.resize(k * k);
      for (auto& x : table)
        if (!(mf >> x)) throw CliError("malformed metric " + d.metric);
    }
    std::vector<double> a(k, 0.0), b(k, 0.0);
    double sa = 0, sb = 0;
    for (std::size_t i = 0; i < pts[0].size(); ++i) sa += masses[0][i];
    for (std::size_t i = 0; i < pts[1].size(); ++i) sb += masses[1][i];
    for (std::size_t i = 0; i < pts[0].size(); ++i) a.at(pts[0][i]) += masses[0][i] / sa;
    for (std::size_t i = 0; i < pts[1].size(); ++i) b.at(pts[1][i]) += masses[1][i] / sb;
    double ex = 0;
    check(submatch_exact_emd(a.data(), k, b.data(), k, table.data(), &ex));
    out["exact"] = {{"emd", ex}, {"error", est - ex}};
  }
  emit(o.out, out.dump(2));
  return 0;
}

struct BenchFlags {
  std::vector<std::size_t> sizes{512, 1024, 2048, 4096, 8192};
  std::size_t seeds = 1;
  std::size_t threads = 1;
  std::size_t exact_cap = 512;
};

struct BenchRow {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t queries = 0;
  double estimate = 0;
  std::uint64_t max_call_queries = 0, call_budget = 0, budget_violations = 0;
  bool has_exact = false;
  double c_alpha = 0, c_beta = 0, error = 0;
  std::string failure;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

int cmd_bench(const Options& o, const BenchFlags& b) {
  for (std::size_t n : b.sizes)
    if (n < 2) throw CliError("bench sizes must be >= 2");
  if (b.seeds == 0) throw CliError("--seeds must be >= 1");
  std::vector<BenchRow> rows;
  for (std::size_t n : b.sizes)
    for (std::size_t s = 0; s < b.seeds; ++s) rows.push_back({n, o.config.seed + s});
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < rows.size();) {
      BenchRow& row = rows[i];
      try {
        InstanceSpec spec = o.instance;
        spec.n = row.n;
        spec.seed = row.seed;
        Instance inst(spec);
        submatch_config cfg = o.config;
        cfg.seed = row.seed;
        submatch_result* r = nullptr;
        check(submatch_estimate_mwm(inst.h, &cfg, &r));
        json rep = json::parse(submatch_result_json(r));
        row.estimate = submatch_result_estimate(r);
        submatch_result_free(r);
        row.queries = rep["total_queries"].get<std::uint64_t>();
        row.max_call_queries = rep["max_call_queries"].get<std::uint64_t>();
        row.call_budget = rep["call_budget"].get<std::uint64_t>();
        row.budget_violations = rep["budget_violations"].get<std::uint64_t>();
        if (row.n <= b.exact_cap) {
          auto by = costs_by_size(inst.h);
          row.has_exact = true;
          row.c_alpha = exact_at(by, row.n, cfg.alpha);
          row.c_beta = exact_at(by, row.n, cfg.beta);
          double gap = row.estimate < row.c_alpha ? row.c_alpha - row.estimate
                       : row.estimate > row.c_beta ? row.estimate - row.c_beta
                                                   : 0.0;
          row.error = row.c_beta > 0 ? gap / row.c_beta : gap;
        }
      } catch (const std::exception& e) {
        row.failure = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::max<std::size_t>(1, b.threads); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& row : rows)
    if (!row.failure.empty()) throw CliError("n=" + std::to_string(row.n) + ": " + row.failure);

  std::ostringstream csv;
  csv << "n,seed,queries,estimate,max_call_queries,call_budget,budget_violations,exact_alpha,exact_beta,"
         "error\n";
  for (const auto& r : rows) {
    csv << r.n << ',' << r.seed << ',' << r.queries << ',' << fmt(r.estimate) << ',' << r.max_call_queries
        << ',' << r.call_budget << ',' << r.budget_violations << ',';
    if (r.has_exact)
      csv << fmt(r.c_alpha) << ',' << fmt(r.c_beta) << ',' << fmt(r.error);
    else
      csv << ",,";
    csv << '\n';
  }
  // Least-squares slope of log(queries) on log(n).
  std::vector<std::size_t> distinct = b.sizes;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (const auto& r : rows) {
      double x = std::log(static_cast<double>(r.n)), y = std::log(static_cast<double>(std::max<std::uint64_t>(1, r.queries)));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      m += 1;
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    csv << "# slope," << fmt(slope) << '\n';
  }
  std::string text = csv.str();
  text.pop_back();
  emit(o.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sublinear min-weight bipartite matching with outliers"};
  app.require_subcommand(1);
  Options o;
  submatch_config_default(&o.config);
  DistFiles dist;
  BenchFlags bench;

  auto* gen = app.add_subcommand("gen", "Write a generated instance in the core format");
  add_instance_flags(gen, o.instance, false);
  gen->add_option("--seed", o.config.seed, "Generator seed (falls back to SUBMATCH_SEED)");
  gen->add_option("--path", o.instance.path, "Source matrix for the file generator");
  gen->add_flag("--binary", o.binary, "Write the binary format");
  gen->add_option("--out", o.out, "Output path")->required();

  auto* mwm = app.add_subcommand("estimate-mwm", "Estimate min-weight matching cost with outliers");
  add_instance_flags(mwm, o.instance, true);
  add_run_flags(mwm, o);
  mwm->add_flag("--exact", o.exact, "Report exact c(M^alpha), c(M^beta); exit 2 on a sandwich breach");

  auto* emd = app.add_subcommand("estimate-emd", "Estimate Earth Mover's Distance from samples");
  add_run_flags(emd, o);
  emd->add_option("--metric", dist.metric, "k x k table in the core format, values in [0, 1]")->required();
  emd->add_option("--mu", dist.mu, "Mass list: lines 'point mass'");
  emd->add_option("--nu", dist.nu, "Mass list: lines 'point mass'");
  emd->add_option("--mu-stream", dist.mu_stream, "File of whitespace-separated point ids");
  emd->add_option("--nu-stream", dist.nu_stream, "File of whitespace-separated point ids");
  emd->add_option("--support", dist.n, "Support bound n (default: largest mass list)");
  emd->add_flag("--exact", o.exact, "Report the exact EMD of the mass lists");

  auto* knap = app.add_subcommand("knapsack", "Estimate the largest matching within a cost budget");
  add_instance_flags(knap, o.instance, true);
  add_run_flags(knap, o);
  knap->add_option("--budget", o.budget, "Cost budget B")->required()->check(CLI::NonNegativeNumber);
  knap->add_flag("--exact", o.exact, "Report the exact knapsack matching size");

  auto* bq = app.add_subcommand("bench-queries", "Query counts over a size sweep, as CSV");
  add_instance_flags(bq, o.instance, false);
  add_run_flags(bq, o);
  bq->add_option("--sizes", bench.sizes, "Sizes n")->delimiter(',');
  bq->add_option("--seeds", bench.seeds, "Seeds per size");
  bq->add_option("--threads", bench.threads, "Worker threads");
  bq->add_option("--exact-cap", bench.exact_cap, "Largest n compared against the exact baseline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    CLI::App* sub = app.get_subcommands().front();
    finalize(sub, o);
    const std::string name = sub->get_name();
    if (name == "gen") return cmd_gen(o);
    if (name == "estimate-mwm") return cmd_estimate_mwm(o);
    if (name == "estimate-emd") return cmd_estimate_emd(o, dist);
    if (name == "knapsack") return cmd_knapsack(o);
    return cmd_bench(o, bench);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
