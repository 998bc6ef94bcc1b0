#include "rapkit/qbox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "rapkit/model.hpp"
#include "util.hpp"

namespace rapkit {

using detail::BoundSum;
using detail::clampv;
using detail::stable_sum;

namespace {

void check_shapes(const std::vector<double>& a, const std::vector<double>& b,
                  const std::vector<double>& l, const std::vector<double>& u) {
  size_t n = a.size();
  if (b.size() != n || l.size() != n || u.size() != n)
    fail(ErrorCode::DimensionMismatch, "vector lengths differ");
  for (size_t i = 0; i < n; ++i) {
    if (!(a[i] > 0.0)) fail(ErrorCode::NonpositiveScale, "a[" + std::to_string(i + 1) + "] <= 0");
    if (l[i] > u[i] || l[i] == kInf || u[i] == -kInf)
      fail(ErrorCode::Infeasible, "empty box for variable " + std::to_string(i + 1));
  }
}

void check_box_feasible(const std::vector<double>& l, const std::vector<double>& u, double R) {
  BoundSum sl, su;
  for (double v : l) sl.add(v);
  for (double v : u) su.add(v);
  if (sl.value() != -kInf && R < sl.value() - kFeasTol)
    fail(ErrorCode::Infeasible,
         "R below the lower-bound total by " + std::to_string(sl.value() - R));
  if (su.value() != kInf && R > su.value() + kFeasTol)
    fail(ErrorCode::Infeasible,
         "R above the upper-bound total by " + std::to_string(R - su.value()));
}

double quad_objective(const std::vector<double>& a, const std::vector<double>& b,
                      const std::vector<double>& x) {
  std::vector<double> terms(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    terms[i] = x[i] * x[i] / (2.0 * a[i]) + b[i] * x[i];
  return stable_sum(terms);
}

std::vector<double> clamp_solution(const std::vector<double>& a, const std::vector<double>& b,
                                   const std::vector<double>& l, const std::vector<double>& u,
                                   double lambda) {
  std::vector<double> x(a.size());
  for (size_t i = 0; i < a.size(); ++i) x[i] = clampv(a[i] * (lambda - b[i]), l[i], u[i]);
  return x;
}

// One Newton step on the free slope knocks out summation residue.
double refine_multiplier(const std::vector<double>& a, const std::vector<double>& b,
                         const std::vector<double>& l, const std::vector<double>& u,
                         double R, double lambda) {
  auto x = clamp_solution(a, b, l, u, lambda);
  double resid = R - stable_sum(x);
  if (resid == 0.0) return lambda;
  double slope = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    if (x[i] > l[i] && x[i] < u[i]) slope += a[i];
  if (slope > 0.0) lambda += resid / slope;
  return lambda;
}

}  // namespace

BreakpointSet make_breakpoints(const std::vector<double>& a, const std::vector<double>& b,
                               const std::vector<double>& l, const std::vector<double>& u) {
  BreakpointSet bs;
  bs.values.reserve(2 * a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::isfinite(l[i])) bs.values.push_back({b[i] + l[i] / a[i], static_cast<int>(i), false});
    if (std::isfinite(u[i])) bs.values.push_back({b[i] + u[i] / a[i], static_cast<int>(i), true});
  }
  std::sort(bs.values.begin(), bs.values.end(), [](const Breakpoint& x, const Breakpoint& y) {
    if (x.value != y.value) return x.value < y.value;
    if (x.var != y.var) return x.var < y.var;
    return x.upper < y.upper;
  });
  return bs;
}

double qbox_multiplier(const std::vector<double>& a, const std::vector<double>& b,
                       const std::vector<double>& l, const std::vector<double>& u, double T) {
  auto ev = make_breakpoints(a, b, l, u).values;

  // Running description of the piecewise-linear map
  // g(lambda) = fixed + slope * lambda - inter on the current segment.
  double fixed = 0.0, slope = 0.0, inter = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::isfinite(l[i])) fixed += l[i];
    else {
      slope += a[i];
      inter += a[i] * b[i];
    }
  }
  auto gval = [&](double t) { return fixed + slope * t - inter; };

  if (ev.empty()) return (T - fixed + inter) / slope;

  double t0 = ev.front().value;
  if (T <= gval(t0)) {
    if (slope > 0.0) return std::min((T - fixed + inter) / slope, t0);
    return t0;  // flat head segment: T equals the lower-bound total
  }

  size_t p = 0;
  double last = t0;
  while (p < ev.size()) {
    double t = ev[p].value;
    while (p < ev.size() && ev[p].value == t) {
      const auto& e = ev[p];
      if (!e.upper) {
        fixed -= l[e.var];
        slope += a[e.var];
        inter += a[e.var] * b[e.var];
      } else {
        slope -= a[e.var];
        inter -= a[e.var] * b[e.var];
        fixed += u[e.var];
      }
      ++p;
    }
    last = t;
    if (p >= ev.size()) break;
    double tn = ev[p].value;
    if (gval(tn) >= T) {
      if (slope > 0.0) return clampv((T - fixed + inter) / slope, t, tn);
      return t;  // flat crossing: report the segment's left endpoint
    }
  }
  // Past the last breakpoint; either free mass remains or T is the upper total.
  if (slope > 0.0) return std::max((T - fixed + inter) / slope, last);
  return last;
}

Solution solve_qbox_continuous(const std::vector<double>& a, const std::vector<double>& b,
                               const std::vector<double>& l, const std::vector<double>& u,
                               double R) {
  check_shapes(a, b, l, u);
  check_box_feasible(l, u, R);
  double lambda = qbox_multiplier(a, b, l, u, R);
  lambda = refine_multiplier(a, b, l, u, R, lambda);
  Solution sol;
  sol.x = clamp_solution(a, b, l, u, lambda);
  sol.lambda = lambda;
  sol.objective_value = quad_objective(a, b, sol.x);
  sol.solver = "breakpoint";
  return sol;
}

Solution solve_qbox_variable_fixing(const std::vector<double>& a, const std::vector<double>& b,
                                    const std::vector<double>& l, const std::vector<double>& u,
                                    double R) {
  check_shapes(a, b, l, u);
  check_box_feasible(l, u, R);
  const size_t n = a.size();
  std::vector<int> active(n);
  std::iota(active.begin(), active.end(), 0);
  std::vector<double> x(n, 0.0);
  double r_act = R;
  double lambda = 0.0;

  while (!active.empty()) {
    double sa = 0.0, sab = 0.0;
    for (int i : active) {
      sa += a[i];
      sab += a[i] * b[i];
    }
    lambda = (r_act + sab) / sa;

    double viol_lo = 0.0, viol_hi = 0.0;
    for (int i : active) {
      double xi = a[i] * (lambda - b[i]);
      if (xi < l[i]) viol_lo += l[i] - xi;
      if (xi > u[i]) viol_hi += xi - u[i];
    }
    if (viol_lo == 0.0 && viol_hi == 0.0) {
      for (int i : active) x[i] = clampv(a[i] * (lambda - b[i]), l[i], u[i]);
      break;
    }
    // Fix the side with the larger aggregate violation; those variables sit
    // at that bound in the optimum.
    bool fix_lower = viol_lo >= viol_hi;
    std::vector<int> keep;
    keep.reserve(active.size());
    for (int i : active) {
      double xi = a[i] * (lambda - b[i]);
      if (fix_lower && xi < l[i]) {
        x[i] = l[i];
        r_act -= l[i];
      } else if (!fix_lower && xi > u[i]) {
        x[i] = u[i];
        r_act -= u[i];
      } else {
        keep.push_back(i);
      }
    }
    active.swap(keep);
  }
  double resid = R - stable_sum(x);
  if (std::abs(resid) > kFeasTol)
    fail(ErrorCode::Infeasible, "fixed vector misses the resource total");

  Solution sol;
  sol.x = std::move(x);
  sol.lambda = lambda;
  sol.objective_value = quad_objective(a, b, sol.x);
  sol.solver = "fixing";
  return sol;
}

Solution solve_qbox_integer(const std::vector<double>& a, const std::vector<double>& b,
                            const std::vector<double>& l, const std::vector<double>& u,
                            double R) {
  check_shapes(a, b, l, u);
  if (!detail::is_integral(R))
    fail(ErrorCode::Infeasible, "integer instance with a fractional resource total");
  std::vector<double> li(l), ui(u);
  for (size_t i = 0; i < l.size(); ++i) {
    li[i] = detail::round_up_int(li[i]);
    ui[i] = detail::round_down_int(ui[i]);
    if (li[i] > ui[i])
      fail(ErrorCode::Infeasible, "empty integer range for variable " + std::to_string(i + 1));
  }
  R = std::round(R);
  check_box_feasible(li, ui, R);
  const size_t n = a.size();

  // Unit marginal of raising x_i from v to v+1.
  auto marginal = [&](size_t i, double v) { return (v + 0.5) / a[i] + b[i]; };
  auto take_below = [&](double lam) {
    // x_i(lam): units whose marginal is <= lam, clamped into the box.
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i) {
      double v = a[i] * (lam - b[i]) + 0.5;
      x[i] = v >= ui[i] ? ui[i] : (v <= li[i] ? li[i] : std::floor(v));
    }
    return x;
  };
  auto total = [&](double lam) { return stable_sum(take_below(lam)); };

  Solution sol;
  sol.solver = "integer-threshold";

  BoundSum sl;
  for (double v : li) sl.add(v);
  if (sl.value() != -kInf && R <= sl.value()) {
    sol.x = li;
    sol.objective_value = quad_objective(a, b, sol.x);
    return sol;
  }

  double sa = 0.0, sab = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sa += a[i];
    sab += a[i] * b[i];
  }
  double lam0 = (R + sab) / sa;
  double lo = lam0, hi = lam0, step = 1.0;
  for (int it = 0; it < 200 && total(lo) >= R; ++it) {
    lo -= step;
    step *= 2.0;
  }
  step = 1.0;
  for (int it = 0; it < 200 && total(hi) < R; ++it) {
    hi += step;
    step *= 2.0;
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (total(mid) >= R ? hi : lo) = mid;
  }

  std::vector<double> x = take_below(lo);
  std::vector<double> cap = take_below(hi);
  long long deficit = static_cast<long long>(std::llround(R - stable_sum(x)));

  // Residual units all share the threshold numerically; lowest index first.
  using Entry = std::pair<double, size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  for (size_t i = 0; i < n; ++i)
    if (cap[i] > x[i]) heap.push({marginal(i, x[i]), i});
  double lam_used = lo;
  while (deficit > 0) {
    if (heap.empty()) fail(ErrorCode::Infeasible, "threshold distribution exhausted");
    auto [m, i] = heap.top();
    heap.pop();
    x[i] += 1.0;
    lam_used = m;
    --deficit;
    if (cap[i] > x[i]) heap.push({marginal(i, x[i]), i});
  }

  sol.x = std::move(x);
  sol.lambda = lam_used;
  sol.objective_value = quad_objective(a, b, sol.x);
  return sol;
}

}  // namespace rapkit
