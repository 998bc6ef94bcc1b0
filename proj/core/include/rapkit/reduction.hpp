#pragma once

#include "rapkit/model.hpp"

namespace rapkit {

enum class SolverChoice { Auto, Breakpoint, Fixing, Laminar, NestedFast };

const char* to_string(SolverChoice choice);

// Solves the quadratic instance with the same (a, b) and constraints,
// ignoring any attached f. Auto picks the kind's dedicated solver.
Solution solve_quadratic(const Instance& inst, SolverChoice choice = SolverChoice::Auto);

// Solves an (a,b,f)-separable instance by solving its quadratic counterpart,
// then re-certifies the point under f and reports the f objective. A failed
// f-certificate raises CERTIFICATE_FAILURE.
Solution solve_separable(const Instance& inst, SolverChoice choice = SolverChoice::Auto);

// Solves the same continuous constraints under two strictly convex objectives
// and checks that the solutions coincide coordinatewise within tol.
// NOT_STRICTLY_CONVEX unless both carry the strict flag.
bool check_strict_equivalence(const ObjectiveSpec& obj_f, const ObjectiveSpec& obj_fbar,
                              const ConstraintSpec& cons, double tol = 1e-7);

}  // namespace rapkit
