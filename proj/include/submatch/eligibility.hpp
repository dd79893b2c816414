#pragma once

#include "submatch/instance.hpp"
#include "submatch/oracles.hpp"

namespace submatch {

// phi(u) + phi(v) <= c(u,v) + 1, with equality phi(u) + phi(v) = c(u,v) on matched edges.
// Absent edges impose no constraint.
bool is_one_feasible(Vertex u, Vertex v, const PotentialOracle& phi, const MatchingOracle& m,
                     const IntegerCosts& c);

enum class EligibilityMode { Eligibility, Forward };

class EligibilityView {
 public:
  EligibilityView(const IntegerCosts& c, const PotentialOracle& phi, const MatchingOracle& m,
                  EligibilityMode mode = EligibilityMode::Eligibility)
      : c_(c), phi_(phi), m_(m), mode_(mode) {}

  // Arguments on opposite sides, either order.
  bool is_eligible(Vertex a, Vertex b) const;
  // (u, v) not in M and phi(u) + phi(v) = c(u, v) + 1.
  bool eligible_nonmatched(std::uint32_t u, std::uint32_t v) const;
  // (u, v) in M and phi(u) + phi(v) = c(u, v).
  bool eligible_matched(std::uint32_t u, std::uint32_t v) const;

  EligibilityMode mode() const { return mode_; }
  const IntegerCosts& costs() const { return c_; }
  const PotentialOracle& potential() const { return phi_; }
  const MatchingOracle& matching() const { return m_; }

 private:
  const IntegerCosts& c_;
  const PotentialOracle& phi_;
  const MatchingOracle& m_;
  EligibilityMode mode_;
};

inline bool is_eligible(Vertex a, Vertex b, const EligibilityView& view) {
  return view.is_eligible(a, b);
}

}  // namespace submatch
