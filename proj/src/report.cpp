#include "submatch/report.hpp"

#include <json.hpp>

namespace submatch {

std::string report_to_json(const Report& r, bool include_timings, int indent) {
  nlohmann::ordered_json j;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["gamma"] = r.gamma;
  j["xi_pad"] = r.xi_pad;
  j["w_bar"] = r.w_bar;
  j["C"] = r.C;
  j["estimate"] = r.estimate;
  j["matched_fraction"] = r.matched_fraction;
  j["total_queries"] = r.total_queries;
  j["backend"] = r.backend;
  j["seed"] = r.seed;
  j["stage_timings"] = nlohmann::ordered_json::object();
  if (include_timings)
    for (const auto& [stage, ms] : r.stage_timings) j["stage_timings"][stage] = ms;
  j["n"] = r.n;
  j["n_bar"] = r.n_bar;
  j["unit"] = r.unit;
  j["T"] = r.T;
  j["k"] = r.k;
  j["params"] = r.params;
  j["strict"] = r.strict;
  j["gamma_prime"] = r.gamma_prime;
  j["free_left"] = r.free_left;
  j["spurious"] = r.spurious;
  j["exact_fallback"] = r.exact_fallback;
  j["subroutine_calls"] = r.subroutine_calls;
  j["max_call_queries"] = r.max_call_queries;
  j["call_budget"] = r.call_budget;
  j["budget_violations"] = r.budget_violations;
  j["exhausted_calls"] = r.exhausted_calls;
  j["degradations"] = r.degradations;
  return j.dump(indent);
}

}  // namespace submatch
