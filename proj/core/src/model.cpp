#include "rapkit/model.hpp"

#include <algorithm>
#include <cmath>

#include "rapkit/tree_index.hpp"
#include "util.hpp"

namespace rapkit {

using detail::stable_sum;

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::NonpositiveScale: return "NONPOSITIVE_SCALE";
    case ErrorCode::MalformedFamily: return "MALFORMED_FAMILY";
    case ErrorCode::DomainViolation: return "DOMAIN_VIOLATION";
    case ErrorCode::Infeasible: return "INFEASIBLE";
    case ErrorCode::InfeasiblePoint: return "INFEASIBLE_POINT";
    case ErrorCode::CertificateFailure: return "CERTIFICATE_FAILURE";
    case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::GreedyUnsafe: return "GREEDY_UNSAFE";
    case ErrorCode::NotStrictlyConvex: return "NOT_STRICTLY_CONVEX";
    case ErrorCode::ParseError: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Box: return "box";
    case ConstraintKind::Gbc: return "gbc";
    case ConstraintKind::Nested: return "nested";
    case ConstraintKind::Laminar: return "laminar";
  }
  return "unknown";
}

const char* to_string(VariableDomain dom) {
  return dom == VariableDomain::Continuous ? "continuous" : "integer";
}

// ---- phi ---------------------------------------------------------------

namespace {

double transform(const ObjectiveSpec& obj, int i, double xi) {
  return xi / obj.a[i] + obj.b[i];
}

double f_at(const ObjectiveSpec& obj, int i, double xi) {
  double y = transform(obj, i, xi);
  if (!obj.f->domain.contains(y))
    fail(ErrorCode::DomainViolation,
         "f undefined at transformed coordinate " + std::to_string(i + 1));
  return obj.f->eval(y);
}

}  // namespace

double phi_value(const ObjectiveSpec& obj, int i, double xi) {
  if (obj.quadratic()) return xi * xi / (2.0 * obj.a[i]) + obj.b[i] * xi;
  return obj.a[i] * f_at(obj, i, xi);
}

double phi_left(const ObjectiveSpec& obj, int i, double xi) {
  double y = transform(obj, i, xi);
  if (obj.quadratic()) return y;
  if (!obj.f->domain.contains(y))
    fail(ErrorCode::DomainViolation, "derivative outside the domain of f");
  return obj.f->left_deriv(y);
}

double phi_right(const ObjectiveSpec& obj, int i, double xi) {
  double y = transform(obj, i, xi);
  if (obj.quadratic()) return y;
  if (!obj.f->domain.contains(y))
    fail(ErrorCode::DomainViolation, "derivative outside the domain of f");
  return obj.f->right_deriv(y);
}

double phi_step_down(const ObjectiveSpec& obj, int i, double xi) {
  return phi_value(obj, i, xi) - phi_value(obj, i, xi - 1.0);
}

double phi_step_up(const ObjectiveSpec& obj, int i, double xi) {
  return phi_value(obj, i, xi + 1.0) - phi_value(obj, i, xi);
}

// ---- validation --------------------------------------------------------

Instance validate_instance(ObjectiveSpec obj, ConstraintSpec cons, VariableDomain dom) {
  const int n = cons.n;
  if (n <= 0) fail(ErrorCode::DimensionMismatch, "instance has no variables");
  if (obj.n() != n || static_cast<int>(obj.b.size()) != n)
    fail(ErrorCode::DimensionMismatch, "objective vectors do not match n");
  for (int i = 0; i < n; ++i)
    if (!(obj.a[i] > 0.0))
      fail(ErrorCode::NonpositiveScale, "a[" + std::to_string(i + 1) + "] <= 0");

  if (cons.lower.empty()) cons.lower.assign(n, -kInf);
  if (cons.upper.empty()) cons.upper.assign(n, kInf);
  if (static_cast<int>(cons.lower.size()) != n || static_cast<int>(cons.upper.size()) != n)
    fail(ErrorCode::DimensionMismatch, "bound vectors do not match n");
  if (cons.set_lower.size() != cons.sets.size() || cons.set_upper.size() != cons.sets.size())
    fail(ErrorCode::DimensionMismatch, "set bound vectors do not match the family");

  if (dom == VariableDomain::Integer) {
    for (int i = 0; i < n; ++i) {
      cons.lower[i] = detail::round_up_int(cons.lower[i]);
      cons.upper[i] = detail::round_down_int(cons.upper[i]);
    }
    for (size_t j = 0; j < cons.sets.size(); ++j) {
      cons.set_lower[j] = detail::round_up_int(cons.set_lower[j]);
      cons.set_upper[j] = detail::round_down_int(cons.set_upper[j]);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (cons.lower[i] == kInf || cons.upper[i] == -kInf || cons.lower[i] > cons.upper[i])
      fail(ErrorCode::Infeasible, "empty box for variable " + std::to_string(i + 1));
  }
  for (size_t j = 0; j < cons.sets.size(); ++j) {
    auto& s = cons.sets[j];
    std::sort(s.begin(), s.end());
    for (size_t p = 0; p < s.size(); ++p) {
      if (s[p] < 0 || s[p] >= n)
        fail(ErrorCode::MalformedFamily, "set " + std::to_string(j + 1) + " index out of range");
      if (p > 0 && s[p] == s[p - 1])
        fail(ErrorCode::MalformedFamily, "set " + std::to_string(j + 1) + " repeats an index");
    }
    if (cons.set_lower[j] > cons.set_upper[j])
      fail(ErrorCode::Infeasible, "empty interval for set " + std::to_string(j + 1));
  }

  switch (cons.kind) {
    case ConstraintKind::Box:
      if (!cons.sets.empty())
        fail(ErrorCode::MalformedFamily, "box instances carry no sets");
      break;
    case ConstraintKind::Gbc: {
      std::vector<char> hit(n, 0);
      for (const auto& s : cons.sets)
        for (int v : s) {
          if (hit[v]) fail(ErrorCode::MalformedFamily, "groups are not disjoint");
          hit[v] = 1;
        }
      for (int v = 0; v < n; ++v)
        if (!hit[v]) fail(ErrorCode::MalformedFamily, "groups do not cover every variable");
      break;
    }
    case ConstraintKind::Nested:
      to_nested_chain(cons);  // validates the chain
      break;
    case ConstraintKind::Laminar:
      break;  // build_tree validates
  }
  build_tree(cons);

  if (!obj.quadratic()) {
    const auto& dm = obj.f->domain;
    for (int i = 0; i < n; ++i) {
      double ylo = cons.lower[i] == -kInf ? -kInf : transform(obj, i, cons.lower[i]);
      double yhi = cons.upper[i] == kInf ? kInf : transform(obj, i, cons.upper[i]);
      bool ok = (ylo == -kInf ? dm.lo == -kInf : dm.contains(ylo)) &&
                (yhi == kInf ? dm.hi == kInf : dm.contains(yhi));
      if (!ok)
        fail(ErrorCode::DomainViolation,
             "feasible box leaves the domain of f at variable " + std::to_string(i + 1));
    }
  }
  return Instance{std::move(obj), std::move(cons), dom};
}

double evaluate_objective(const ObjectiveSpec& obj, const std::vector<double>& x) {
  const int n = obj.n();
  if (static_cast<int>(x.size()) != n)
    fail(ErrorCode::DimensionMismatch, "x does not match n");
  std::vector<double> terms(n);
  for (int i = 0; i < n; ++i) terms[i] = phi_value(obj, i, x[i]);
  return stable_sum(terms);
}

// ---- feasibility ---------------------------------------------------------

FeasibilityReport check_feasibility(const ConstraintSpec& cons, const std::vector<double>& x,
                                    double tol) {
  if (static_cast<int>(x.size()) != cons.n)
    fail(ErrorCode::DimensionMismatch, "x does not match n");
  FeasibilityReport rep;
  rep.resource_residual = stable_sum(x) - cons.R;
  if (std::abs(rep.resource_residual) > tol)
    rep.violations.push_back({Violation::Type::Resource, -1, rep.resource_residual});
  for (int i = 0; i < cons.n; ++i) {
    if (!cons.lower.empty() && x[i] < cons.lower[i] - tol)
      rep.violations.push_back({Violation::Type::BoxLower, i, x[i] - cons.lower[i]});
    if (!cons.upper.empty() && x[i] > cons.upper[i] + tol)
      rep.violations.push_back({Violation::Type::BoxUpper, i, x[i] - cons.upper[i]});
  }
  for (int j = 0; j < cons.num_sets(); ++j) {
    double s = 0.0;
    for (int v : cons.sets[j]) s += x[v];
    if (s < cons.set_lower[j] - tol)
      rep.violations.push_back({Violation::Type::SetLower, j, s - cons.set_lower[j]});
    if (s > cons.set_upper[j] + tol)
      rep.violations.push_back({Violation::Type::SetUpper, j, s - cons.set_upper[j]});
  }
  std::stable_sort(rep.violations.begin(), rep.violations.end(),
                   [](const Violation& a, const Violation& b) {
                     return std::abs(a.residual) > std::abs(b.residual);
                   });
  rep.feasible = rep.violations.empty();
  return rep;
}

std::vector<int> tight_sets(const ConstraintSpec& cons, const std::vector<double>& x,
                            double tol) {
  std::vector<int> out;
  for (int j = 0; j < cons.num_sets(); ++j) {
    double s = 0.0;
    for (int v : cons.sets[j]) s += x[v];
    bool lo = cons.set_lower[j] != -kInf && std::abs(s - cons.set_lower[j]) <= tol;
    bool hi = cons.set_upper[j] != kInf && std::abs(s - cons.set_upper[j]) <= tol;
    if (lo || hi) out.push_back(j);
  }
  return out;
}

// ---- exchange graph -------------------------------------------------------

ExchangeGraph exchangeable_pairs(const ConstraintSpec& cons, const std::vector<double>& x,
                                 VariableDomain dom, double strict_tol) {
  auto rep = check_feasibility(cons, x);
  if (!rep.feasible) fail(ErrorCode::InfeasiblePoint, "x is not feasible");
  LaminarTree tree = build_tree(cons);
  TreeIndex idx = make_tree_index(tree);
  auto sums = tree.subtree_sums(x);

  ExchangeGraph g;
  for (int i = 0; i < cons.n; ++i)
    for (int k = 0; k < cons.n; ++k) {
      if (i == k) continue;
      double eps = 0.0;
      if (pair_exchangeable(tree, idx, sums, x, i, k, dom, strict_tol, &eps))
        g.pairs.push_back({i, k, eps});
    }
  return g;
}

// ---- exchange-pair optimality certificate ------------------------------------

namespace {

struct CertItem {
  double give = -kInf;   // largest donor marginal escaping this item
  double receive = kInf; // smallest receiver marginal entering this item
  int give_var = -1;
  int recv_var = -1;
};

bool cert_violated(double give, double receive, double tol) {
  double scale = std::max({1.0, std::abs(give), std::abs(receive)});
  return receive < give - tol * scale;
}

double cert_gap(double give, double receive) {
  double scale = std::max({1.0, std::abs(give), std::abs(receive)});
  return (give - receive) / scale;
}

}  // namespace

Certificate verify_condition1(const ObjectiveSpec& obj, const LaminarTree& tree,
                              const std::vector<double>& x, VariableDomain dom,
                              double tol) {
  const int n = tree.n;
  if (static_cast<int>(x.size()) != n)
    fail(ErrorCode::DimensionMismatch, "x does not match n");
  const bool integral = dom == VariableDomain::Integer;

  // Feasibility gate against the tree's own bounds.
  auto sums = tree.subtree_sums(x);
  for (int i = 0; i < n; ++i)
    if (x[i] < tree.var_lower[i] - kFeasTol || x[i] > tree.var_upper[i] + kFeasTol)
      fail(ErrorCode::InfeasiblePoint, "x violates a variable bound");
  for (size_t v = 0; v < tree.nodes.size(); ++v)
    if (sums[v] < tree.nodes[v].lo - kFeasTol || sums[v] > tree.nodes[v].hi + kFeasTol)
      fail(ErrorCode::InfeasiblePoint, "x violates a set bound");

  // Donor and receiver marginals per variable. Continuous marginals are
  // one-sided derivatives with the comparison tolerance also applied in the
  // argument, so solver roundoff straddling a kink cannot misreport.
  std::vector<double> give(n, -kInf), receive(n, kInf);
  for (int i = 0; i < n; ++i) {
    if (integral) {
      if (x[i] - 1.0 >= tree.var_lower[i] - kFeasTol)
        give[i] = phi_step_down(obj, i, x[i]);
      if (x[i] + 1.0 <= tree.var_upper[i] + kFeasTol)
        receive[i] = phi_step_up(obj, i, x[i]);
    } else {
      if (x[i] - tree.var_lower[i] > kFeasTol) {
        if (obj.quadratic()) {
          give[i] = x[i] / obj.a[i] + obj.b[i] - tol;
        } else {
          double y = x[i] / obj.a[i] + obj.b[i];
          double ys = obj.f->domain.contains(y - tol) ? y - tol : y;
          if (!obj.f->domain.contains(ys))
            fail(ErrorCode::DomainViolation, "x leaves the domain of f");
          give[i] = obj.f->left_deriv(ys);
        }
      }
      if (tree.var_upper[i] - x[i] > kFeasTol) {
        if (obj.quadratic()) {
          receive[i] = x[i] / obj.a[i] + obj.b[i] + tol;
        } else {
          double y = x[i] / obj.a[i] + obj.b[i];
          double ys = obj.f->domain.contains(y + tol) ? y + tol : y;
          if (!obj.f->domain.contains(ys))
            fail(ErrorCode::DomainViolation, "x leaves the domain of f");
          receive[i] = obj.f->right_deriv(ys);
        }
      }
    }
  }

  const double gate = integral ? 1.0 - kFeasTol : kFeasTol;
  auto export_blocked = [&](int v) {
    if (tree.nodes[v].lo == -kInf) return false;
    double slack = sums[v] - tree.nodes[v].lo;
    return integral ? slack < gate : slack <= gate;
  };
  auto import_blocked = [&](int v) {
    if (tree.nodes[v].hi == kInf) return false;
    double slack = tree.nodes[v].hi - sums[v];
    return integral ? slack < gate : slack <= gate;
  };

  Certificate cert;
  cert.worst_gap = -kInf;
  const int nn = static_cast<int>(tree.nodes.size());
  std::vector<CertItem> agg(nn);

  for (int v = nn - 1; v >= 0; --v) {
    // Two best donors and receivers among this node's branches; a violating
    // pair with its join here must use two distinct branches.
    CertItem best;
    double g1 = -kInf, g2 = -kInf, r1 = kInf, r2 = kInf;
    int g1_item = -1, g2_item = -1, r1_item = -1, r2_item = -1;
    int g1_var = -1, g2_var = -1, r1_var = -1, r2_var = -1;
    int item_id = 0;
    auto feed = [&](double g, double r, int gv, int rv) {
      if (g > g1) {
        g2 = g1; g2_item = g1_item; g2_var = g1_var;
        g1 = g; g1_item = item_id; g1_var = gv;
      } else if (g > g2) {
        g2 = g; g2_item = item_id; g2_var = gv;
      }
      if (r < r1) {
        r2 = r1; r2_item = r1_item; r2_var = r1_var;
        r1 = r; r1_item = item_id; r1_var = rv;
      } else if (r < r2) {
        r2 = r; r2_item = item_id; r2_var = rv;
      }
      ++item_id;
    };
    for (int i : tree.nodes[v].direct_vars) feed(give[i], receive[i], i, i);
    for (int c : tree.nodes[v].children) {
      double g = export_blocked(c) ? -kInf : agg[c].give;
      double r = import_blocked(c) ? kInf : agg[c].receive;
      feed(g, r, agg[c].give_var, agg[c].recv_var);
    }

    auto consider = [&](double g, int gv, double r, int rv) {
      if (gv < 0 || rv < 0 || g == -kInf || r == kInf) return;
      double gap = cert_gap(g, r);
      if (gap > cert.worst_gap) {
        cert.worst_gap = gap;
        cert.witness = std::make_pair(gv, rv);
      }
      if (cert_violated(g, r, tol)) cert.optimal = false;
    };
    if (g1_item >= 0 && r1_item >= 0) {
      if (g1_item != r1_item) consider(g1, g1_var, r1, r1_var);
      else {
        consider(g1, g1_var, r2, r2_var);
        consider(g2, g2_var, r1, r1_var);
      }
    }
    agg[v].give = g1;
    agg[v].receive = r1;
    agg[v].give_var = g1_var;
    agg[v].recv_var = r1_var;
  }
  if (cert.worst_gap == -kInf) cert.worst_gap = 0.0;
  if (cert.optimal) cert.witness.reset();
  return cert;
}

Certificate verify_condition1(const ObjectiveSpec& obj, const ConstraintSpec& cons,
                              const std::vector<double>& x, VariableDomain dom,
                              double tol) {
  auto rep = check_feasibility(cons, x);
  if (!rep.feasible) fail(ErrorCode::InfeasiblePoint, "x is not feasible");
  return verify_condition1(obj, build_tree(cons), x, dom, tol);
}

}  // namespace rapkit
