#include "rapkit/laminar_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rapkit/model.hpp"
#include "rapkit/tree_index.hpp"
#include "rapkit/qbox.hpp"
#include "util.hpp"

namespace rapkit {

using detail::BoundSum;
using detail::clampv;
using detail::stable_sum;

namespace {

std::vector<double> gather(const std::vector<double>& v, const std::vector<int>& idx) {
  std::vector<double> out(idx.size());
  for (size_t p = 0; p < idx.size(); ++p) out[p] = v[idx[p]];
  return out;
}

double quad_objective(const std::vector<double>& a, const std::vector<double>& b,
                      const std::vector<double>& x) {
  std::vector<double> terms(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    terms[i] = x[i] * x[i] / (2.0 * a[i]) + b[i] * x[i];
  return stable_sum(terms);
}

// Shared exit: quadratic self-certificate, tight sets, objective. A failing
// certificate here is a solver defect, not a property of the instance.
void finalize(const std::vector<double>& a, const std::vector<double>& b,
              const ConstraintSpec& cons, VariableDomain dom, Solution* sol) {
  ObjectiveSpec quad{a, b, std::nullopt};
  Certificate cert = verify_condition1(quad, cons, sol->x, dom);
  if (!cert.optimal) {
    std::string w = cert.witness ? " witness (" + std::to_string(cert.witness->first + 1) + "," +
                                       std::to_string(cert.witness->second + 1) + ")"
                                 : "";
    fail(ErrorCode::CertificateFailure,
         std::string(sol->solver) + " output failed the exchange certificate" + w);
  }
  sol->certified = true;
  sol->tight_sets = tight_sets(cons, sol->x);
  sol->objective_value = quad_objective(a, b, sol->x);
}

}  // namespace

// ---- generalized bound constraints ---------------------------------------

namespace {

struct Group {
  std::vector<int> idx;
  std::vector<double> a, b, l, u;
  double lo = -kInf, hi = kInf;  // effective total bounds
};

std::vector<Group> make_groups(const std::vector<double>& a, const std::vector<double>& b,
                               const std::vector<double>& l, const std::vector<double>& u,
                               const std::vector<std::vector<int>>& groups,
                               const std::vector<double>& L, const std::vector<double>& U,
                               bool integral) {
  std::vector<Group> gs(groups.size());
  for (size_t j = 0; j < groups.size(); ++j) {
    Group& g = gs[j];
    g.idx = groups[j];
    g.a = gather(a, g.idx);
    g.b = gather(b, g.idx);
    g.l = gather(l, g.idx);
    g.u = gather(u, g.idx);
    if (integral) {
      for (auto& v : g.l) v = detail::round_up_int(v);
      for (auto& v : g.u) v = detail::round_down_int(v);
    }
    BoundSum sl, su;
    for (double v : g.l) sl.add(v);
    for (double v : g.u) su.add(v);
    g.lo = std::max(L[j], sl.value());
    g.hi = std::min(U[j], su.value());
    if (integral) {
      g.lo = detail::round_up_int(g.lo);
      g.hi = detail::round_down_int(g.hi);
    }
    if (g.lo > g.hi + (integral ? 0.0 : kFeasTol))
      fail(ErrorCode::Infeasible, "group " + std::to_string(j + 1) + " has an empty total range");
  }
  return gs;
}

Solution solve_gbc_continuous(const std::vector<double>& a, const std::vector<double>& b,
                              const std::vector<double>& l, const std::vector<double>& u,
                              std::vector<Group> gs, double R) {
  BoundSum slo, shi;
  for (const auto& g : gs) {
    slo.add(g.lo);
    shi.add(g.hi);
  }
  if ((slo.value() != -kInf && R < slo.value() - kFeasTol) ||
      (shi.value() != kInf && R > shi.value() + kFeasTol))
    fail(ErrorCode::Infeasible, "R outside the group total range");

  // Realized total at a global multiplier: each group's tentative box total,
  // clamped into the group's effective bounds by its own multiplier shift.
  auto group_total = [](const Group& g, double lam) {
    double t = 0.0;
    for (size_t p = 0; p < g.a.size(); ++p)
      t += clampv(g.a[p] * (lam - g.b[p]), g.l[p], g.u[p]);
    return clampv(t, g.lo, g.hi);
  };
  auto global_total = [&](double lam) {
    double t = 0.0;
    for (const auto& g : gs) t += group_total(g, lam);
    return t;
  };

  std::vector<double> bps;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::isfinite(l[i])) bps.push_back(b[i] + l[i] / a[i]);
    if (std::isfinite(u[i])) bps.push_back(b[i] + u[i] / a[i]);
  }
  for (const auto& g : gs) {
    if (std::isfinite(g.lo)) bps.push_back(qbox_multiplier(g.a, g.b, g.l, g.u, g.lo));
    if (std::isfinite(g.hi)) bps.push_back(qbox_multiplier(g.a, g.b, g.l, g.u, g.hi));
  }
  std::sort(bps.begin(), bps.end());

  double lambda;
  if (bps.empty()) {
    double sa = 0.0, sab = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
      sa += a[i];
      sab += a[i] * b[i];
    }
    lambda = (R + sab) / sa;
  } else if (global_total(bps.front()) >= R) {
    lambda = bps.front();
  } else {
    size_t lo2 = 0, hi2 = bps.size() - 1;  // G(bps[hi2]) >= R
    while (lo2 + 1 < hi2) {
      size_t mid = (lo2 + hi2) / 2;
      (global_total(bps[mid]) >= R ? hi2 : lo2) = mid;
    }
    double ga = global_total(bps[lo2]), gb = global_total(bps[hi2]);
    lambda = gb > ga ? bps[lo2] + (R - ga) * (bps[hi2] - bps[lo2]) / (gb - ga) : bps[lo2];
  }
  // A couple of Newton passes absorb interpolation error across kinks.
  for (int pass = 0; pass < 3; ++pass) {
    double resid = R - global_total(lambda);
    if (resid == 0.0) break;
    double slope = 0.0;
    for (const auto& g : gs) {
      double t = 0.0, s = 0.0;
      for (size_t p = 0; p < g.a.size(); ++p) {
        double xi = g.a[p] * (lambda - g.b[p]);
        if (xi > g.l[p] && xi < g.u[p]) s += g.a[p];
        t += clampv(xi, g.l[p], g.u[p]);
      }
      if (t > g.lo && t < g.hi) slope += s;
    }
    if (slope <= 0.0) break;
    lambda += resid / slope;
  }

  std::vector<double> totals(gs.size());
  double sum_t = 0.0;
  for (size_t j = 0; j < gs.size(); ++j) {
    totals[j] = group_total(gs[j], lambda);
    sum_t += totals[j];
  }
  double resid = R - sum_t;
  if (resid != 0.0) {
    for (size_t j = 0; j < gs.size() && resid != 0.0; ++j) {
      double room = resid > 0 ? gs[j].hi - totals[j] : gs[j].lo - totals[j];
      double step = resid > 0 ? std::min(resid, room) : std::max(resid, room);
      totals[j] += step;
      resid -= step;
    }
    if (std::abs(resid) > kFeasTol) fail(ErrorCode::Infeasible, "group totals miss R");
  }

  Solution sol;
  sol.x.assign(a.size(), 0.0);
  for (size_t j = 0; j < gs.size(); ++j) {
    Solution inner = solve_qbox_continuous(gs[j].a, gs[j].b, gs[j].l, gs[j].u, totals[j]);
    for (size_t p = 0; p < gs[j].idx.size(); ++p) sol.x[gs[j].idx[p]] = inner.x[p];
  }
  sol.lambda = lambda;
  sol.solver = "gbc";
  return sol;
}

Solution solve_gbc_integer(const std::vector<double>& a, const std::vector<double>& b,
                           std::vector<Group> gs, double R) {
  if (!detail::is_integral(R))
    fail(ErrorCode::Infeasible, "integer instance with a fractional resource total");
  R = std::round(R);
  double floor_total = 0.0, cap_total = 0.0;
  bool cap_inf = false;
  for (auto& g : gs) {
    if (g.lo == -kInf)
      fail(ErrorCode::Infeasible, "integer groups need finite effective floors");
    floor_total += g.lo;
    if (g.hi == kInf) cap_inf = true;
    else cap_total += g.hi;
  }
  if (R < floor_total - kFeasTol || (!cap_inf && R > cap_total + kFeasTol))
    fail(ErrorCode::Infeasible, "R outside the group total range");

  // Start each group at its floor optimum, then hand the remaining units to
  // the cheapest group marginal; within a group the next unit is the
  // cheapest member marginal, so the group solution stays optimal unit by
  // unit.
  std::vector<std::vector<double>> gx(gs.size());
  std::vector<double> gtotal(gs.size());
  for (size_t j = 0; j < gs.size(); ++j) {
    Solution inner = solve_qbox_integer(gs[j].a, gs[j].b, gs[j].l, gs[j].u, gs[j].lo);
    gx[j] = inner.x;
    gtotal[j] = gs[j].lo;
  }
  auto next_unit = [&](size_t j, size_t* member) {
    double best = kInf;
    size_t arg = SIZE_MAX;
    for (size_t p = 0; p < gs[j].a.size(); ++p) {
      if (gx[j][p] + 1.0 > gs[j].u[p]) continue;
      double m = (gx[j][p] + 0.5) / gs[j].a[p] + gs[j].b[p];
      if (m < best) {
        best = m;
        arg = p;
      }
    }
    *member = arg;
    return best;
  };

  long long units = static_cast<long long>(std::llround(R - floor_total));
  std::optional<double> lam;
  while (units > 0) {
    double best = kInf;
    size_t bj = SIZE_MAX, bp = SIZE_MAX;
    for (size_t j = 0; j < gs.size(); ++j) {
      if (gtotal[j] + 1.0 > gs[j].hi) continue;
      size_t p;
      double m = next_unit(j, &p);
      if (p != SIZE_MAX && m < best) {
        best = m;
        bj = j;
        bp = p;
      }
    }
    if (bj == SIZE_MAX) fail(ErrorCode::Infeasible, "no group can absorb the next unit");
    gx[bj][bp] += 1.0;
    gtotal[bj] += 1.0;
    lam = best;
    --units;
  }

  Solution sol;
  sol.x.assign(a.size(), 0.0);
  for (size_t j = 0; j < gs.size(); ++j)
    for (size_t p = 0; p < gs[j].idx.size(); ++p) sol.x[gs[j].idx[p]] = gx[j][p];
  sol.lambda = lam;
  sol.solver = "gbc";
  (void)b;
  return sol;
}

}  // namespace

Solution solve_gbc(const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& l, const std::vector<double>& u,
                   const std::vector<std::vector<int>>& groups,
                   const std::vector<double>& L, const std::vector<double>& U, double R,
                   VariableDomain dom) {
  ConstraintSpec cons;
  cons.n = static_cast<int>(a.size());
  cons.R = R;
  cons.kind = ConstraintKind::Gbc;
  cons.lower = l;
  cons.upper = u;
  cons.sets = groups;
  cons.set_lower = L;
  cons.set_upper = U;
  Instance inst = validate_instance(ObjectiveSpec{a, b, std::nullopt}, cons, dom);

  bool integral = dom == VariableDomain::Integer;
  auto gs = make_groups(a, b, inst.cons.lower, inst.cons.upper, inst.cons.sets,
                        inst.cons.set_lower, inst.cons.set_upper, integral);
  Solution sol = integral ? solve_gbc_integer(a, b, std::move(gs), inst.cons.R)
                          : solve_gbc_continuous(a, b, inst.cons.lower, inst.cons.upper,
                                                 std::move(gs), inst.cons.R);
  finalize(a, b, inst.cons, dom, &sol);
  return sol;
}

// ---- laminar solver ---------------------------------------------------------

namespace {

// Subtree offer at multiplier level t: every variable follows its clamp rule
// and every node compresses its children's aggregate into its own interval,
// which is exactly complementary slackness for the node multipliers. The
// resulting map is monotone and piecewise linear in t.
//
// Nodes are relaid in DFS preorder so every subtree is one contiguous block
// and a level search at a clamped node touches only its own block.
struct TreeSolver {
  const std::vector<double>* a;
  const std::vector<double>* b;
  const LaminarTree* tree;
  int nn = 0;
  std::vector<int> parent, bend;         // subtree of v = [v, bend[v])
  std::vector<double> lo, hi;            // node intervals, dfs ids
  std::vector<std::vector<int>> direct;  // direct variables per dfs node
  std::vector<double> off, slope;        // per-sweep scratch
  std::vector<double> x;
  double seed_lo = 0.0, seed_hi = 0.0;   // bracket seeds from the b range

  TreeSolver(const std::vector<double>& a_, const std::vector<double>& b_,
             const LaminarTree& tree_)
      : a(&a_), b(&b_), tree(&tree_) {
    nn = static_cast<int>(tree_.nodes.size());
    parent.assign(nn, -1);
    lo.resize(nn);
    hi.resize(nn);
    direct.resize(nn);
    std::vector<std::pair<int, int>> stack{{0, -1}};
    int id = 0;
    while (!stack.empty()) {
      auto [v, par] = stack.back();
      stack.pop_back();
      parent[id] = par;
      lo[id] = tree_.nodes[v].lo;
      hi[id] = tree_.nodes[v].hi;
      direct[id] = tree_.nodes[v].direct_vars;
      for (auto it = tree_.nodes[v].children.rbegin(); it != tree_.nodes[v].children.rend();
           ++it)
        stack.push_back({*it, id});
      ++id;
    }
    std::vector<int> size(nn, 1);
    for (int v = nn - 1; v > 0; --v) size[parent[v]] += size[v];
    bend.resize(nn);
    for (int v = 0; v < nn; ++v) bend[v] = v + size[v];

    off.assign(nn, 0.0);
    slope.assign(nn, 0.0);
    x.assign(a_.size(), 0.0);
    for (double v : b_) {
      seed_lo = std::min(seed_lo, v);
      seed_hi = std::max(seed_hi, v);
    }
    seed_lo -= 1.0;
    seed_hi += 1.0;
  }

  // Offers and slopes over one block at level t; off[v] excludes v's own
  // interval, slope counts variables strictly free with no clamped set on
  // the path inside the block.
  void sweep(int root, double t) {
    for (int v = root; v < bend[root]; ++v) {
      double s = 0.0, sl = 0.0;
      for (int i : direct[v]) {
        double raw = (*a)[i] * (t - (*b)[i]);
        s += clampv(raw, tree->var_lower[i], tree->var_upper[i]);
        if (raw > tree->var_lower[i] && raw < tree->var_upper[i]) sl += (*a)[i];
      }
      off[v] = s;
      slope[v] = sl;
    }
    for (int v = bend[root] - 1; v > root; --v) {
      off[parent[v]] += clampv(off[v], lo[v], hi[v]);
      if (off[v] > lo[v] && off[v] < hi[v]) slope[parent[v]] += slope[v];
    }
  }

  double offer(int root, double t) {
    sweep(root, t);
    return off[root];
  }

  // Level at which the block under root offers exactly T.
  double level_for(int root, double T) {
    double t_lo = seed_lo, t_hi = seed_hi, step = 1.0;
    for (int it = 0; it < 300 && offer(root, t_lo) > T; ++it) {
      t_lo -= step;
      step *= 2.0;
    }
    step = 1.0;
    for (int it = 0; it < 300 && offer(root, t_hi) < T; ++it) {
      t_hi += step;
      step *= 2.0;
    }
    for (int it = 0; it < 300; ++it) {
      double mid = 0.5 * (t_lo + t_hi);
      if (mid <= t_lo || mid >= t_hi) break;
      (offer(root, mid) >= T ? t_hi : t_lo) = mid;
    }
    double t = t_hi;
    for (int pass = 0; pass < 3; ++pass) {
      double resid = T - offer(root, t);
      if (resid == 0.0 || slope[root] <= 0.0) break;
      t += resid / slope[root];
    }
    return t;
  }

  // Unclamped nodes share their parent's level; clamped nodes re-solve their
  // block at the bound with their own internal level. Deferred work items
  // keep each sweep's offers valid while they are read.
  void assign_root(double t0) {
    struct Item {
      int node;
      double value;  // level, or block total to hit
      bool is_level;
    };
    std::vector<Item> work{{0, t0, true}};
    std::vector<std::pair<int, double>> defer;
    while (!work.empty()) {
      Item item = work.back();
      work.pop_back();
      double tv = item.is_level ? item.value : level_for(item.node, item.value);
      sweep(item.node, tv);
      defer.clear();
      int v = item.node;
      while (v < bend[item.node]) {
        if (v != item.node) {
          double sc = off[v];
          double Tc = clampv(sc, lo[v], hi[v]);
          if (sc != Tc) {
            defer.push_back({v, Tc});
            v = bend[v];
            continue;
          }
        }
        for (int i : direct[v])
          x[i] = clampv((*a)[i] * (tv - (*b)[i]), tree->var_lower[i], tree->var_upper[i]);
        ++v;
      }
      for (auto [c, Tc] : defer) work.push_back({c, Tc, false});
    }
  }

  // Whether any set interval clamps at level t.
  bool any_clamped(double t) {
    sweep(0, t);
    for (int v = 1; v < nn; ++v)
      if (off[v] < lo[v] || off[v] > hi[v]) return true;
    return false;
  }
};

Solution solve_laminar_continuous(const std::vector<double>& a, const std::vector<double>& b,
                                  const ConstraintSpec& cons, const LaminarTree& tree) {
  TreeSolver ts(a, b, tree);
  double lambda = ts.level_for(0, cons.R);
  ts.assign_root(lambda);

  Solution sol;
  // A single multiplier describes the solution only when no set clamps.
  sol.lambda = ts.any_clamped(lambda) ? std::nullopt : std::optional<double>(lambda);
  sol.x = std::move(ts.x);
  sol.solver = "laminar";
  return sol;
}

// Integer laminar: steepest unit-exchange descent from a feasible point.
// Every improving unit move strictly decreases the objective, local exchange
// optimality is global optimality for these structures, and the final point
// re-passes the certificate in finalize.
Solution solve_laminar_integer(const std::vector<double>& a, const std::vector<double>& b,
                               const ConstraintSpec& cons, const LaminarTree& tight) {
  std::vector<double> x = feasible_fill(tight, VariableDomain::Integer);
  ObjectiveSpec quad{a, b, std::nullopt};
  LaminarTree tree = build_tree(cons);
  TreeIndex idx = make_tree_index(tree);

  const int n = cons.n;
  long long guard = 0;
  for (int i = 0; i < n; ++i) {
    double span = std::min(cons.upper[i] - cons.lower[i], 1e6);
    guard += static_cast<long long>(span) + 1;
  }
  guard = 4 * guard * n + 1000;

  for (long long it = 0; it < guard; ++it) {
    auto sums = tree.subtree_sums(x);
    int bi = -1, bk = -1;
    double best_gain = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (i == k) continue;
        double gain = phi_step_down(quad, i, x[i]) - phi_step_up(quad, k, x[k]);
        if (gain <= best_gain + 1e-15) continue;
        if (!pair_exchangeable(tree, idx, sums, x, i, k, VariableDomain::Integer, kFeasTol))
          continue;
        best_gain = gain;
        bi = i;
        bk = k;
      }
    if (bi < 0) {
      Solution sol;
      sol.x = std::move(x);
      sol.solver = "laminar";
      return sol;
    }
    x[bi] -= 1.0;
    x[bk] += 1.0;
  }
  fail(ErrorCode::CertificateFailure, "integer exchange descent did not converge");
}

}  // namespace

Solution solve_laminar(const std::vector<double>& a, const std::vector<double>& b,
                       const ConstraintSpec& cons, VariableDomain dom) {
  Instance inst = validate_instance(ObjectiveSpec{a, b, std::nullopt}, cons, dom);
  LaminarTree tree = build_tree(inst.cons);
  LaminarTree tight = propagate_bounds(tree, dom);  // feasibility gate

  Solution sol = dom == VariableDomain::Integer
                     ? solve_laminar_integer(a, b, inst.cons, tight)
                     : solve_laminar_continuous(a, b, inst.cons, tree);
  finalize(a, b, inst.cons, dom, &sol);
  return sol;
}

// ---- nested fast path --------------------------------------------------------

namespace {

struct ChainCtx {
  const std::vector<double>* a;
  const std::vector<double>* b;
  std::vector<double> l, u;
  const NestedChain* chain;
  VariableDomain dom;
  std::vector<double> x;
  // Prefix sums of the box bounds along the chain order, with infinity
  // counts so segments containing unbounded variables stay unbounded.
  std::vector<double> pl_fin, pu_fin;
  std::vector<int> pl_inf, pu_inf;
  int pins = 0;

  double seg_lo(int from, int to) const {
    return pl_inf[to] > pl_inf[from] ? -kInf : pl_fin[to] - pl_fin[from];
  }
  double seg_hi(int from, int to) const {
    return pu_inf[to] > pu_inf[from] ? kInf : pu_fin[to] - pu_fin[from];
  }
};

void solve_range(ChainCtx& ctx, int s, int e, int jlo, int jhi, double total, double base,
                 std::optional<double>* root_lambda) {
  const auto& order = ctx.chain->order;
  const bool integral = ctx.dom == VariableDomain::Integer;
  std::vector<int> idx(order.begin() + s, order.begin() + e);
  auto ga = gather(*ctx.a, idx);
  auto gb = gather(*ctx.b, idx);
  auto gl = gather(ctx.l, idx);
  auto gu = gather(ctx.u, idx);
  Solution relax = integral ? solve_qbox_integer(ga, gb, gl, gu, total)
                            : solve_qbox_continuous(ga, gb, gl, gu, total);
  if (root_lambda) *root_lambda = relax.lambda;

  int best = -1;
  double best_resid = 0.0;
  if (jlo < jhi) {
    double run = 0.0;
    int j = jlo;
    for (int pos = s; pos < e && j < jhi; ++pos) {
      run += relax.x[pos - s];
      while (j < jhi && ctx.chain->prefix_len[j] == pos + 1) {
        double lo = ctx.chain->L[j] == -kInf ? -kInf : ctx.chain->L[j] - base;
        double hi = ctx.chain->U[j] == kInf ? kInf : ctx.chain->U[j] - base;
        double resid = 0.0;
        if (run > hi + kFeasTol) resid = run - hi;
        else if (run < lo - kFeasTol) resid = run - lo;
        // Ties prefer the shorter prefix, which this scan meets first.
        if (resid != 0.0 && std::abs(resid) > std::abs(best_resid)) {
          best = j;
          best_resid = resid;
        }
        ++j;
      }
    }
  }
  if (best < 0) {
    for (int pos = s; pos < e; ++pos) ctx.x[order[pos]] = relax.x[pos - s];
    return;
  }

  if (++ctx.pins > ctx.chain->m())
    fail(ErrorCode::CertificateFailure, "decomposition pinned more sets than the chain holds");

  // Clamp the pin into the interval the frame can realize: one ascending and
  // one descending interval pass over the frame's prefixes.
  int nj = jhi - jlo;
  std::vector<double> Lt(nj), Ut(nj);
  {
    double cl = 0.0, cu = 0.0;
    int prev = s;
    for (int j = jlo; j < jhi; ++j) {
      int p = ctx.chain->prefix_len[j];
      double sl = ctx.seg_lo(prev, p), su = ctx.seg_hi(prev, p);
      cl = (cl == -kInf || sl == -kInf) ? -kInf : cl + sl;
      cu = (cu == kInf || su == kInf) ? kInf : cu + su;
      double lo = ctx.chain->L[j] == -kInf ? -kInf : ctx.chain->L[j] - base;
      double hi = ctx.chain->U[j] == kInf ? kInf : ctx.chain->U[j] - base;
      cl = std::max(cl, lo);
      cu = std::min(cu, hi);
      if (integral) {
        cl = detail::round_up_int(cl);
        cu = detail::round_down_int(cu);
      }
      if (cl > cu + kFeasTol)
        fail(ErrorCode::Infeasible, "empty interval at prefix " + std::to_string(j + 1));
      Lt[j - jlo] = cl;
      Ut[j - jlo] = cu;
      prev = p;
    }
    double nl = total, nu = total;
    int next = e;
    for (int j = jhi - 1; j >= jlo; --j) {
      int p = ctx.chain->prefix_len[j];
      double sl = ctx.seg_lo(p, next), su = ctx.seg_hi(p, next);
      double lo = (nl == -kInf || su == kInf) ? -kInf : nl - su;
      double hi = (nu == kInf || sl == -kInf) ? kInf : nu - sl;
      Lt[j - jlo] = std::max(Lt[j - jlo], lo);
      Ut[j - jlo] = std::min(Ut[j - jlo], hi);
      if (integral) {
        Lt[j - jlo] = detail::round_up_int(Lt[j - jlo]);
        Ut[j - jlo] = detail::round_down_int(Ut[j - jlo]);
      }
      if (Lt[j - jlo] > Ut[j - jlo] + kFeasTol)
        fail(ErrorCode::Infeasible, "empty interval at prefix " + std::to_string(j + 1));
      nl = Lt[j - jlo];
      nu = Ut[j - jlo];
      next = p;
    }
  }

  int p = ctx.chain->prefix_len[best];
  double want = best_resid > 0.0 ? ctx.chain->U[best] - base : ctx.chain->L[best] - base;
  double B = clampv(want, Lt[best - jlo], Ut[best - jlo]);
  solve_range(ctx, s, p, jlo, best, B, base, nullptr);
  solve_range(ctx, p, e, best + 1, jhi, total - B, base + B, nullptr);
}

}  // namespace

Solution solve_nested_fast(const std::vector<double>& a, const std::vector<double>& b,
                           const std::vector<double>& l, const std::vector<double>& u,
                           const NestedChain& chain, double R, VariableDomain dom) {
  const int n = static_cast<int>(a.size());
  const int m = chain.m();
  if (static_cast<int>(chain.order.size()) != n)
    fail(ErrorCode::DimensionMismatch, "chain order does not match n");
  {
    std::vector<char> seen(n, 0);
    for (int v : chain.order) {
      if (v < 0 || v >= n || seen[v])
        fail(ErrorCode::MalformedFamily, "chain order is not a permutation");
      seen[v] = 1;
    }
    int prev = 0;
    for (int j = 0; j < m; ++j) {
      if (chain.prefix_len[j] <= prev || chain.prefix_len[j] >= n)
        fail(ErrorCode::MalformedFamily, "chain prefixes must strictly increase");
      prev = chain.prefix_len[j];
    }
    if (chain.L.size() != static_cast<size_t>(m) || chain.U.size() != static_cast<size_t>(m))
      fail(ErrorCode::DimensionMismatch, "chain bound vectors do not match m");
  }

  LaminarTree tree = build_tree(chain, l, u, R);
  propagate_bounds(tree, dom);  // feasibility gate

  ChainCtx ctx;
  ctx.a = &a;
  ctx.b = &b;
  ctx.l = l.empty() ? std::vector<double>(n, -kInf) : l;
  ctx.u = u.empty() ? std::vector<double>(n, kInf) : u;
  if (dom == VariableDomain::Integer) {
    for (auto& v : ctx.l) v = detail::round_up_int(v);
    for (auto& v : ctx.u) v = detail::round_down_int(v);
  }
  ctx.chain = &chain;
  ctx.dom = dom;
  ctx.x.assign(n, 0.0);
  ctx.pl_fin.assign(n + 1, 0.0);
  ctx.pu_fin.assign(n + 1, 0.0);
  ctx.pl_inf.assign(n + 1, 0);
  ctx.pu_inf.assign(n + 1, 0);
  for (int pos = 0; pos < n; ++pos) {
    double lv = ctx.l[chain.order[pos]], uv = ctx.u[chain.order[pos]];
    ctx.pl_fin[pos + 1] = ctx.pl_fin[pos] + (lv == -kInf ? 0.0 : lv);
    ctx.pl_inf[pos + 1] = ctx.pl_inf[pos] + (lv == -kInf ? 1 : 0);
    ctx.pu_fin[pos + 1] = ctx.pu_fin[pos] + (uv == kInf ? 0.0 : uv);
    ctx.pu_inf[pos + 1] = ctx.pu_inf[pos] + (uv == kInf ? 1 : 0);
  }

  std::optional<double> lambda;
  solve_range(ctx, 0, n, 0, m, R, 0.0, &lambda);

  Solution sol;
  sol.x = std::move(ctx.x);
  sol.lambda = ctx.pins == 0 ? lambda : std::nullopt;
  sol.solver = "nested-fast";

  ObjectiveSpec quad{a, b, std::nullopt};
  Certificate cert = verify_condition1(quad, tree, sol.x, dom);
  if (!cert.optimal)
    fail(ErrorCode::CertificateFailure, "nested-fast output failed the exchange certificate");
  sol.certified = true;
  double run = 0.0;
  int j = 0;
  for (int pos = 0; pos < n && j < m; ++pos) {
    run += sol.x[chain.order[pos]];
    while (j < m && chain.prefix_len[j] == pos + 1) {
      bool lo = chain.L[j] != -kInf && std::abs(run - chain.L[j]) <= kFeasTol;
      bool hi = chain.U[j] != kInf && std::abs(run - chain.U[j]) <= kFeasTol;
      if (lo || hi) sol.tight_sets.push_back(j);
      ++j;
    }
  }
  sol.objective_value = quad_objective(a, b, sol.x);
  return sol;
}

}  // namespace rapkit
