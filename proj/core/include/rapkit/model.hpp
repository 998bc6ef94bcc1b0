#pragma once

#include "rapkit/laminar_tree.hpp"
#include "rapkit/types.hpp"

namespace rapkit {

struct Instance {
  ObjectiveSpec obj;
  ConstraintSpec cons;
  VariableDomain dom = VariableDomain::Continuous;
};

// Checks dimensions, positive scales, family structure per kind, and (for a
// non-quadratic objective) that the transformed feasible box lies inside the
// function's domain. Integer instances come back with box and set bounds
// rounded inward; everything else is returned as given.
Instance validate_instance(ObjectiveSpec obj, ConstraintSpec cons, VariableDomain dom);

// sum_i a_i f(x_i / a_i + b_i); quadratic instances evaluate the constant-free
// form sum_i x_i^2 / (2 a_i) + b_i x_i.
double evaluate_objective(const ObjectiveSpec& obj, const std::vector<double>& x);

struct Violation {
  enum class Type { Resource, BoxLower, BoxUpper, SetLower, SetUpper };
  Type type;
  int index;        // variable or set index; -1 for the resource total
  double residual;  // signed; positive above the bound, negative below
};

struct FeasibilityReport {
  bool feasible = true;
  double resource_residual = 0.0;
  std::vector<Violation> violations;  // sorted by |residual|, largest first
};

FeasibilityReport check_feasibility(const ConstraintSpec& cons, const std::vector<double>& x,
                                    double tol = kFeasTol);

// Enumerates E_C(x). Continuous exchangeability demands slack > strict_tol on
// the donor's lower bound, the receiver's upper bound, and every separating
// set bound; integer exchangeability demands room for a whole unit.
ExchangeGraph exchangeable_pairs(const ConstraintSpec& cons, const std::vector<double>& x,
                                 VariableDomain dom, double strict_tol = kFeasTol);

struct Certificate {
  bool optimal = true;
  std::optional<std::pair<int, int>> witness;  // most violating (from, to)
  double worst_gap = 0.0;                      // normalized; <= 0 when optimal
};

// Exchange-pair optimality check: phi_to_plus >= phi_from_minus over every
// exchangeable pair, evaluated in O(n + m) by aggregating donor and receiver
// marginals over the laminar forest. Continuous instances compare one-sided
// derivatives (argument-shifted by tol in transform space so kinks straddled
// by roundoff do not misreport); integer instances compare unit-step
// difference quotients. Comparisons carry a relative guard so steep functions
// are judged at their own scale.
Certificate verify_condition1(const ObjectiveSpec& obj, const ConstraintSpec& cons,
                              const std::vector<double>& x, VariableDomain dom,
                              double tol = kCertTol);

// Same check against a compact chain (used by the large-n nested path).
Certificate verify_condition1(const ObjectiveSpec& obj, const LaminarTree& tree,
                              const std::vector<double>& x, VariableDomain dom,
                              double tol = kCertTol);

// Family sets met with equality at either bound.
std::vector<int> tight_sets(const ConstraintSpec& cons, const std::vector<double>& x,
                            double tol = kFeasTol);

// phi_i and its one-sided derivatives / unit steps.
double phi_value(const ObjectiveSpec& obj, int i, double xi);
double phi_left(const ObjectiveSpec& obj, int i, double xi);
double phi_right(const ObjectiveSpec& obj, int i, double xi);
double phi_step_down(const ObjectiveSpec& obj, int i, double xi);  // phi(x) - phi(x-1)
double phi_step_up(const ObjectiveSpec& obj, int i, double xi);    // phi(x+1) - phi(x)

}  // namespace rapkit
