#include "rapkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "util.hpp"

namespace rapkit {

using detail::BoundSum;

namespace {

double capped_points(const ConstraintSpec& cons) {
  double prod = 1.0;
  for (int i = 0; i < cons.n; ++i) {
    double span = cons.upper[i] - cons.lower[i] + 1.0;
    prod *= std::max(span, 1.0);
    if (prod > 1e18) return prod;
  }
  return prod;
}

double budget_cap(const OracleBudget& budget) {
  return std::min(budget.max_points, 1e8);
}

}  // namespace

Solution brute_force_integer(const ObjectiveSpec& obj, const ConstraintSpec& cons,
                             OracleBudget budget) {
  Instance inst = validate_instance(obj, cons, VariableDomain::Integer);
  const auto& c = inst.cons;
  const int n = c.n;
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(c.lower[i]) || !std::isfinite(c.upper[i]))
      fail(ErrorCode::BudgetExceeded, "enumeration needs finite bounds");
  if (capped_points(c) > budget_cap(budget))
    fail(ErrorCode::BudgetExceeded, "integer box holds too many points");
  if (!detail::is_integral(c.R)) fail(ErrorCode::Infeasible, "fractional resource total");

  // Suffix bound sums for pruning on the remaining total.
  std::vector<double> suf_lo(n + 1, 0.0), suf_hi(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    suf_lo[i] = suf_lo[i + 1] + c.lower[i];
    suf_hi[i] = suf_hi[i + 1] + c.upper[i];
  }

  // Per-set membership for incremental sums and set pruning.
  const int m = c.num_sets();
  std::vector<std::vector<int>> sets_of(n);
  std::vector<double> set_suf_lo((n + 1) * std::max(m, 1), 0.0),
      set_suf_hi((n + 1) * std::max(m, 1), 0.0);
  for (int j = 0; j < m; ++j)
    for (int v : c.sets[j]) sets_of[v].push_back(j);
  for (int j = 0; j < m; ++j) {
    std::vector<char> in(n, 0);
    for (int v : c.sets[j]) in[v] = 1;
    for (int i = n - 1; i >= 0; --i) {
      set_suf_lo[i * m + j] = set_suf_lo[(i + 1) * m + j] + (in[i] ? c.lower[i] : 0.0);
      set_suf_hi[i * m + j] = set_suf_hi[(i + 1) * m + j] + (in[i] ? c.upper[i] : 0.0);
    }
  }

  std::vector<double> x(n, 0.0), best_x;
  std::vector<double> set_sum(m, 0.0);
  double best_val = kInf;
  double points = 0.0;
  const double cap = budget_cap(budget);

  auto rec = [&](auto&& self, int i, double used) -> void {
    if (i == n) {
      ++points;
      if (points > cap) fail(ErrorCode::BudgetExceeded, "enumeration budget exhausted");
      if (std::abs(used - c.R) > kFeasTol) return;
      for (int j = 0; j < m; ++j)
        if (set_sum[j] < c.set_lower[j] - kFeasTol || set_sum[j] > c.set_upper[j] + kFeasTol)
          return;
      double val = evaluate_objective(inst.obj, x);
      if (val < best_val) {
        best_val = val;
        best_x = x;
      }
      return;
    }
    double need = c.R - used;
    if (need < suf_lo[i] - kFeasTol || need > suf_hi[i] + kFeasTol) return;
    for (int j = 0; j < m; ++j) {
      double lo = set_sum[j] + set_suf_lo[i * m + j];
      double hi = set_sum[j] + set_suf_hi[i * m + j];
      if (hi < c.set_lower[j] - kFeasTol || lo > c.set_upper[j] + kFeasTol) return;
    }
    for (double v = c.lower[i]; v <= c.upper[i] + 0.5; v += 1.0) {
      x[i] = v;
      for (int j : sets_of[i]) set_sum[j] += v;
      self(self, i + 1, used + v);
      for (int j : sets_of[i]) set_sum[j] -= v;
    }
    x[i] = c.lower[i];
  };
  rec(rec, 0, 0.0);

  if (best_x.empty()) fail(ErrorCode::Infeasible, "no feasible integer point");
  Solution sol;
  sol.x = std::move(best_x);
  sol.objective_value = best_val;
  sol.solver = "brute-force";
  sol.tight_sets = tight_sets(c, sol.x);
  return sol;
}

Solution greedy_integer(const ObjectiveSpec& obj, const ConstraintSpec& cons,
                        OracleBudget budget) {
  (void)budget;
  Instance inst = validate_instance(obj, cons, VariableDomain::Integer);
  const auto& c = inst.cons;
  const int n = c.n;
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(c.lower[i]))
      fail(ErrorCode::GreedyUnsafe, "greedy needs finite variable lower bounds");
  if (!detail::is_integral(c.R)) fail(ErrorCode::Infeasible, "fractional resource total");

  // Safe only when the floor already meets every set lower bound.
  const int m = c.num_sets();
  std::vector<double> set_sum(m, 0.0);
  for (int j = 0; j < m; ++j) {
    for (int v : c.sets[j]) set_sum[j] += c.lower[v];
    if (set_sum[j] < c.set_lower[j] - kFeasTol)
      fail(ErrorCode::GreedyUnsafe,
           "set " + std::to_string(j + 1) + " lower bound exceeds the variable floor");
    if (set_sum[j] > c.set_upper[j] + kFeasTol)
      fail(ErrorCode::Infeasible, "variable floor already violates an upper bound");
  }

  std::vector<std::vector<int>> sets_of(n);
  for (int j = 0; j < m; ++j)
    for (int v : c.sets[j]) sets_of[v].push_back(j);

  std::vector<double> x = c.lower;
  double floor_sum = detail::stable_sum(x);
  if (c.R < floor_sum - kFeasTol) fail(ErrorCode::Infeasible, "R below the variable floor");
  long long units = static_cast<long long>(std::llround(c.R - floor_sum));

  auto blocked = [&](int i) {
    if (x[i] + 1.0 > c.upper[i]) return true;
    for (int j : sets_of[i])
      if (set_sum[j] + 1.0 > c.set_upper[j] + kFeasTol) return true;
    return false;
  };

  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  for (int i = 0; i < n; ++i)
    if (!blocked(i)) heap.push({phi_step_up(inst.obj, i, x[i]), i});

  while (units > 0) {
    if (heap.empty()) fail(ErrorCode::Infeasible, "no variable can absorb the next unit");
    auto [mcost, i] = heap.top();
    heap.pop();
    (void)mcost;
    if (blocked(i)) continue;  // a set saturated since this entry was pushed
    x[i] += 1.0;
    for (int j : sets_of[i]) set_sum[j] += 1.0;
    --units;
    if (!blocked(i)) heap.push({phi_step_up(inst.obj, i, x[i]), i});
  }

  Solution sol;
  sol.x = std::move(x);
  sol.objective_value = evaluate_objective(inst.obj, sol.x);
  sol.solver = "greedy";
  sol.tight_sets = tight_sets(c, sol.x);
  return sol;
}

Solution grid_refine_continuous(const ObjectiveSpec& obj, const ConstraintSpec& cons,
                                OracleBudget budget) {
  Instance inst = validate_instance(obj, cons, VariableDomain::Continuous);
  const auto& c = inst.cons;
  const int n = c.n;
  if (n > 4) fail(ErrorCode::BudgetExceeded, "grid refinement is limited to n <= 4");

  LaminarTree tight = propagate_bounds(build_tree(c), VariableDomain::Continuous);
  std::vector<double> x = feasible_fill(tight, VariableDomain::Continuous);

  double evals = 0.0;
  const double cap = budget_cap(budget);
  auto objective = [&](const std::vector<double>& p) {
    if (++evals > cap) fail(ErrorCode::BudgetExceeded, "grid refinement budget exhausted");
    return evaluate_objective(inst.obj, p);
  };

  double cur = objective(x);
  double step = budget.grid_step;
  for (int round = 0; round < 6; ++round) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          if (i == k) continue;
          std::vector<double> cand = x;
          cand[i] -= step;
          cand[k] += step;
          if (cand[i] < c.lower[i] - kFeasTol || cand[k] > c.upper[k] + kFeasTol) continue;
          if (!check_feasibility(c, cand, 1e-9).feasible) continue;
          double val = objective(cand);
          if (val < cur - 1e-15 * std::max(1.0, std::abs(cur))) {
            x = std::move(cand);
            cur = val;
            improved = true;
          }
        }
    }
    step /= 10.0;
  }

  Solution sol;
  sol.x = std::move(x);
  sol.objective_value = cur;
  sol.solver = "grid-refine";
  sol.tight_sets = tight_sets(c, sol.x);
  return sol;
}

}  // namespace rapkit
