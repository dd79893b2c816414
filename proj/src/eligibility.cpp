#include "submatch/eligibility.hpp"

#include "submatch/error.hpp"

namespace submatch {

bool is_one_feasible(Vertex u, Vertex v, const PotentialOracle& phi, const MatchingOracle& m,
                     const IntegerCosts& c) {
  require(u.is_left() && v.is_right(), "is_one_feasible expects (V0, V1)");
  IntCost cost = c.at(u.index(), v.index());
  if (cost == kAbsent) return true;
  std::int64_t sum = phi.eval(u) + phi.eval(v);
  Mate mu = m.mate(u);
  if (mu && *mu == v) return sum == cost;
  return sum <= cost + 1;
}

bool EligibilityView::eligible_nonmatched(std::uint32_t u, std::uint32_t v) const {
  Vertex a = Vertex::left(u), b = Vertex::right(v);
  IntCost cost = c_.at(u, v);
  if (cost == kAbsent) return false;
  if (phi_.eval(a) + phi_.eval(b) != cost + 1) return false;
  Mate mu = m_.mate(a);
  return !(mu && *mu == b);
}

bool EligibilityView::eligible_matched(std::uint32_t u, std::uint32_t v) const {
  Vertex a = Vertex::left(u), b = Vertex::right(v);
  Mate mu = m_.mate(a);
  if (!(mu && *mu == b)) return false;
  IntCost cost = c_.at(u, v);
  if (cost == kAbsent) return false;
  return phi_.eval(a) + phi_.eval(b) == cost;
}

bool EligibilityView::is_eligible(Vertex a, Vertex b) const {
  require(a.side() != b.side(), "eligibility needs one vertex per side");
  Vertex u = a.is_left() ? a : b;
  Vertex v = a.is_left() ? b : a;
  if (eligible_nonmatched(u.index(), v.index())) return true;
  if (mode_ == EligibilityMode::Forward) return false;
  return eligible_matched(u.index(), v.index());
}

}  // namespace submatch
