#include "rapkit/reduction.hpp"

#include <cmath>

#include "rapkit/laminar_solver.hpp"
#include "rapkit/qbox.hpp"

namespace rapkit {

const char* to_string(SolverChoice choice) {
  switch (choice) {
    case SolverChoice::Auto: return "auto";
    case SolverChoice::Breakpoint: return "breakpoint";
    case SolverChoice::Fixing: return "fixing";
    case SolverChoice::Laminar: return "laminar";
    case SolverChoice::NestedFast: return "nested-fast";
  }
  return "unknown";
}

Solution solve_quadratic(const Instance& inst, SolverChoice choice) {
  const auto& a = inst.obj.a;
  const auto& b = inst.obj.b;
  const auto& c = inst.cons;

  if (choice == SolverChoice::Laminar) return solve_laminar(a, b, c, inst.dom);

  switch (c.kind) {
    case ConstraintKind::Box: {
      Solution sol;
      if (inst.dom == VariableDomain::Integer)
        sol = solve_qbox_integer(a, b, c.lower, c.upper, c.R);
      else if (choice == SolverChoice::Fixing)
        sol = solve_qbox_variable_fixing(a, b, c.lower, c.upper, c.R);
      else
        sol = solve_qbox_continuous(a, b, c.lower, c.upper, c.R);
      ObjectiveSpec quad{a, b, std::nullopt};
      Certificate cert = verify_condition1(quad, c, sol.x, inst.dom);
      if (!cert.optimal)
        fail(ErrorCode::CertificateFailure, "box solve failed the exchange certificate");
      sol.certified = true;
      return sol;
    }
    case ConstraintKind::Gbc:
      return solve_gbc(a, b, c.lower, c.upper, c.sets, c.set_lower, c.set_upper, c.R, inst.dom);
    case ConstraintKind::Nested: {
      NestedChain chain = to_nested_chain(c);
      Solution sol = solve_nested_fast(a, b, c.lower, c.upper, chain, c.R, inst.dom);
      sol.tight_sets = tight_sets(c, sol.x);  // chain order may differ from file order
      return sol;
    }
    case ConstraintKind::Laminar:
      return solve_laminar(a, b, c, inst.dom);
  }
  fail(ErrorCode::ParseError, "unknown constraint kind");
}

Solution solve_separable(const Instance& inst, SolverChoice choice) {
  Solution sol = solve_quadratic(inst, choice);
  if (inst.obj.quadratic()) return sol;

  Certificate cert = verify_condition1(inst.obj, inst.cons, sol.x, inst.dom);
  if (!cert.optimal) {
    std::string msg = "quadratic solution failed the certificate under f=" + inst.obj.f->name;
    if (cert.witness)
      msg += " witness (" + std::to_string(cert.witness->first + 1) + "," +
             std::to_string(cert.witness->second + 1) + ")";
    fail(ErrorCode::CertificateFailure, msg);
  }
  sol.certified = true;
  sol.objective_value = evaluate_objective(inst.obj, sol.x);
  return sol;
}

bool check_strict_equivalence(const ObjectiveSpec& obj_f, const ObjectiveSpec& obj_fbar,
                              const ConstraintSpec& cons, double tol) {
  auto strict = [](const ObjectiveSpec& o) { return o.quadratic() || o.f->strictly_convex; };
  if (!strict(obj_f))
    fail(ErrorCode::NotStrictlyConvex, obj_f.f->name + " is not flagged strictly convex");
  if (!strict(obj_fbar))
    fail(ErrorCode::NotStrictlyConvex, obj_fbar.f->name + " is not flagged strictly convex");

  Instance ia = validate_instance(obj_f, cons, VariableDomain::Continuous);
  Instance ib = validate_instance(obj_fbar, cons, VariableDomain::Continuous);
  Solution sa = solve_separable(ia);
  Solution sb = solve_separable(ib);
  for (size_t i = 0; i < sa.x.size(); ++i)
    if (std::abs(sa.x[i] - sb.x[i]) > tol) return false;
  return true;
}

}  // namespace rapkit
