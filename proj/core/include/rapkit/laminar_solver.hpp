#pragma once

#include "rapkit/laminar_tree.hpp"
#include "rapkit/types.hpp"

namespace rapkit {

// Disjoint group bounds on top of the box. Continuous: two-level multiplier
// search — each group's tentative total at the global multiplier is clamped
// into its effective bounds, and the resulting monotone map is breakpoint-
// searched; groups are then solved as box subproblems at their realized
// totals. Integer: groups start at their effective floors and the remaining
// units go to the globally cheapest group marginal (memoized inner solves).
// Every output is certificate-checked.
Solution solve_gbc(const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& l, const std::vector<double>& u,
                   const std::vector<std::vector<int>>& groups,
                   const std::vector<double>& L, const std::vector<double>& U, double R,
                   VariableDomain dom);

// Infeasibility-guided decomposition for any laminar family (box, GBC and
// nested inputs are accepted and routed here too): solve the box relaxation,
// pin the most violated set to its violated bound, and recurse on the inside
// and outside frames. Violations are measured against propagated bounds.
// A failed certificate on the final point is a solver defect and raises
// CERTIFICATE_FAILURE.
Solution solve_laminar(const std::vector<double>& a, const std::vector<double>& b,
                       const ConstraintSpec& cons, VariableDomain dom);

// Chain-specialized decomposition over the compact prefix form; one prefix
// scan finds the most violated set per frame, keeping the whole solve near
// O(n log n) when few constraints bind.
Solution solve_nested_fast(const std::vector<double>& a, const std::vector<double>& b,
                           const std::vector<double>& l, const std::vector<double>& u,
                           const NestedChain& chain, double R, VariableDomain dom);

}  // namespace rapkit
