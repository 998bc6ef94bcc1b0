#pragma once

#include "rapkit/model.hpp"

namespace rapkit {

// Enumeration and refinement caps for the oracles.
struct OracleBudget {
  double max_points = 1e7;  // hard ceiling 1e8
  double grid_step = 0.1;
};

// Exhaustive integer search with branch pruning. Ties resolve to the
// lexicographically smallest vector.
Solution brute_force_integer(const ObjectiveSpec& obj, const ConstraintSpec& cons,
                             OracleBudget budget = {});

// Unit-step greedy from the box floor: each of the R - sum(l) increments goes
// to the cheapest feasible unit marginal (heap order, index tie-break).
// Exact for laminar upper-bound structures; refuses instances whose set lower
// bounds are not already covered by the variable lower bounds (GREEDY_UNSAFE).
Solution greedy_integer(const ObjectiveSpec& obj, const ConstraintSpec& cons,
                        OracleBudget budget = {});

// Pairwise coordinate descent on a shrinking grid (factor 10 per round, six
// rounds from grid_step); n <= 4. Lands within ~1e-5 of the optimum for
// strictly convex objectives.
Solution grid_refine_continuous(const ObjectiveSpec& obj, const ConstraintSpec& cons,
                                OracleBudget budget = {});

}  // namespace rapkit
