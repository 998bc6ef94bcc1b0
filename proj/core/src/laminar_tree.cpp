#include "rapkit/laminar_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "rapkit/tree_index.hpp"
#include "util.hpp"

namespace rapkit {

using detail::BoundSum;
using detail::round_down_int;
using detail::round_up_int;

std::vector<double> LaminarTree::subtree_sums(const std::vector<double>& x) const {
  std::vector<double> s(nodes.size(), 0.0);
  for (int v = static_cast<int>(nodes.size()) - 1; v >= 0; --v) {
    double acc = 0.0;
    for (int i : nodes[v].direct_vars) acc += x[i];
    for (int c : nodes[v].children) acc += s[c];
    s[v] = acc;
  }
  return s;
}

std::vector<int> LaminarTree::subtree_vars(int node) const {
  std::vector<int> vars;
  std::vector<int> stack{node};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    vars.insert(vars.end(), nodes[v].direct_vars.begin(), nodes[v].direct_vars.end());
    for (int c : nodes[v].children) stack.push_back(c);
  }
  std::sort(vars.begin(), vars.end());
  return vars;
}

LaminarTree build_tree(const ConstraintSpec& cons) {
  const int n = cons.n;
  if (n <= 0) fail(ErrorCode::DimensionMismatch, "instance has no variables");

  LaminarTree t;
  t.n = n;
  t.R = cons.R;
  t.var_lower = cons.lower.empty() ? std::vector<double>(n, -kInf) : cons.lower;
  t.var_upper = cons.upper.empty() ? std::vector<double>(n, kInf) : cons.upper;

  t.nodes.emplace_back();
  t.nodes[0].lo = t.nodes[0].hi = cons.R;
  t.nodes[0].subtree_size = n;

  // Process sets largest first, tracking each variable's deepest owner.
  // A set is admissible iff all its members share one owner and it is a
  // strict subset of that owner; anything else crosses the family.
  std::vector<int> order(cons.sets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a2, int b2) {
    return cons.sets[a2].size() > cons.sets[b2].size();
  });

  t.owner.assign(n, 0);
  for (int j : order) {
    const auto& s = cons.sets[j];
    if (s.empty()) fail(ErrorCode::MalformedFamily, "set " + std::to_string(j + 1) + " is empty");
    if (static_cast<int>(s.size()) == n) {
      // Bounds on the full index set merge into the root interval.
      t.nodes[0].lo = std::max(t.nodes[0].lo, cons.set_lower[j]);
      t.nodes[0].hi = std::min(t.nodes[0].hi, cons.set_upper[j]);
      continue;
    }
    int own = t.owner[s[0]];
    for (int v : s) {
      if (v < 0 || v >= n)
        fail(ErrorCode::MalformedFamily, "set " + std::to_string(j + 1) + " has an index out of range");
      if (t.owner[v] != own)
        fail(ErrorCode::MalformedFamily,
             "set " + std::to_string(j + 1) + " crosses another set in the family");
    }
    if (static_cast<int>(s.size()) >= t.nodes[own].subtree_size)
      fail(ErrorCode::MalformedFamily, "set " + std::to_string(j + 1) + " duplicates another set");
    int id = static_cast<int>(t.nodes.size());
    t.nodes.emplace_back();
    t.nodes[id].parent = own;
    t.nodes[id].lo = cons.set_lower[j];
    t.nodes[id].hi = cons.set_upper[j];
    t.nodes[id].orig_set = j;
    t.nodes[id].subtree_size = static_cast<int>(s.size());
    t.nodes[id].depth = t.nodes[own].depth + 1;
    t.nodes[own].children.push_back(id);
    for (int v : s) t.owner[v] = id;
  }
  for (int v = 0; v < n; ++v) t.nodes[t.owner[v]].direct_vars.push_back(v);
  return t;
}

LaminarTree build_tree(const NestedChain& chain, const std::vector<double>& l,
                       const std::vector<double>& u, double R) {
  const int n = static_cast<int>(chain.order.size());
  const int m = chain.m();
  LaminarTree t;
  t.n = n;
  t.R = R;
  t.var_lower = l.empty() ? std::vector<double>(n, -kInf) : l;
  t.var_upper = u.empty() ? std::vector<double>(n, kInf) : u;
  t.nodes.resize(m + 1);
  t.owner.assign(n, 0);

  // Path: root = node 0, then the chain outermost set first.
  t.nodes[0].lo = t.nodes[0].hi = R;
  t.nodes[0].subtree_size = n;
  for (int j = 0; j < m; ++j) {
    int id = j + 1;                  // node for chain set m-1-j
    int cj = m - 1 - j;              // chain index (innermost is deepest)
    t.nodes[id].parent = id - 1;
    t.nodes[id].depth = id;
    t.nodes[id].orig_set = cj;
    t.nodes[id].lo = chain.L[cj];
    t.nodes[id].hi = chain.U[cj];
    t.nodes[id].subtree_size = chain.prefix_len[cj];
    t.nodes[id - 1].children.push_back(id);
  }
  for (int pos = 0; pos < n; ++pos) {
    // Deepest set containing order[pos]: the shortest prefix covering pos.
    int lo2 = 0, hi2 = m;  // number of prefixes covering pos
    while (lo2 < hi2) {
      int mid = (lo2 + hi2) / 2;
      if (chain.prefix_len[mid] > pos) hi2 = mid;
      else lo2 = mid + 1;
    }
    int node = (lo2 == m) ? 0 : m - lo2;  // prefixes lo2..m-1 cover pos
    t.owner[chain.order[pos]] = node;
    t.nodes[node].direct_vars.push_back(chain.order[pos]);
  }
  return t;
}

NestedChain to_nested_chain(const ConstraintSpec& cons) {
  const int m = cons.num_sets();
  std::vector<int> order_sets(m);
  std::iota(order_sets.begin(), order_sets.end(), 0);
  std::sort(order_sets.begin(), order_sets.end(), [&](int a, int b) {
    return cons.sets[a].size() < cons.sets[b].size();
  });

  NestedChain ch;
  ch.order.reserve(cons.n);
  std::vector<char> seen(cons.n, 0);
  int prev = 0;
  for (int j : order_sets) {
    const auto& s = cons.sets[j];
    if (static_cast<int>(s.size()) <= prev || static_cast<int>(s.size()) >= cons.n)
      fail(ErrorCode::MalformedFamily, "nested sets must form a strictly increasing chain");
    std::vector<int> ring;
    for (int v : s) {
      if (v < 0 || v >= cons.n) fail(ErrorCode::MalformedFamily, "set index out of range");
      if (!seen[v]) ring.push_back(v);
    }
    if (static_cast<int>(ring.size()) != static_cast<int>(s.size()) - prev)
      fail(ErrorCode::MalformedFamily, "nested sets must form a strictly increasing chain");
    std::sort(ring.begin(), ring.end());
    for (int v : ring) {
      seen[v] = 1;
      ch.order.push_back(v);
    }
    prev = static_cast<int>(s.size());
    ch.prefix_len.push_back(prev);
    ch.L.push_back(cons.set_lower[j]);
    ch.U.push_back(cons.set_upper[j]);
  }
  for (int v = 0; v < cons.n; ++v)
    if (!seen[v]) ch.order.push_back(v);
  return ch;
}

LaminarTree propagate_bounds(const LaminarTree& tree, VariableDomain dom) {
  LaminarTree t = tree;
  const bool integral = dom == VariableDomain::Integer;
  const int nn = static_cast<int>(t.nodes.size());

  auto node_name = [&](int v) {
    if (v < 0) return std::string("leaf");
    if (t.nodes[v].orig_set < 0) return std::string("root");
    return "set " + std::to_string(t.nodes[v].orig_set + 1);
  };

  if (integral) {
    for (int i = 0; i < t.n; ++i) {
      t.var_lower[i] = round_up_int(t.var_lower[i]);
      t.var_upper[i] = round_down_int(t.var_upper[i]);
      if (t.var_lower[i] > t.var_upper[i])
        fail(ErrorCode::Infeasible, "empty integer range for variable " + std::to_string(i + 1));
    }
    for (auto& nd : t.nodes) {
      nd.lo = round_up_int(nd.lo);
      nd.hi = round_down_int(nd.hi);
    }
  }

  // Bottom-up: node interval meets the sum of its children intervals.
  for (int v = nn - 1; v >= 0; --v) {
    BoundSum sl, su;
    for (int i : t.nodes[v].direct_vars) {
      sl.add(t.var_lower[i]);
      su.add(t.var_upper[i]);
    }
    for (int c : t.nodes[v].children) {
      sl.add(t.nodes[c].lo);
      su.add(t.nodes[c].hi);
    }
    t.nodes[v].lo = std::max(t.nodes[v].lo, sl.value());
    t.nodes[v].hi = std::min(t.nodes[v].hi, su.value());
    if (integral) {
      t.nodes[v].lo = round_up_int(t.nodes[v].lo);
      t.nodes[v].hi = round_down_int(t.nodes[v].hi);
    }
    if (t.nodes[v].lo > t.nodes[v].hi + kFeasTol)
      fail(ErrorCode::Infeasible, "empty interval at " + node_name(v));
  }

  // Top-down: children intervals meet the parent residual.
  for (int v = 0; v < nn; ++v) {
    BoundSum sl, su;
    for (int i : t.nodes[v].direct_vars) {
      sl.add(t.var_lower[i]);
      su.add(t.var_upper[i]);
    }
    for (int c : t.nodes[v].children) {
      sl.add(t.nodes[c].lo);
      su.add(t.nodes[c].hi);
    }
    auto tighten = [&](double& lo, double& hi, const std::string& what) {
      double other_lo = sl.value_without(lo);
      double other_hi = su.value_without(hi);
      if (other_hi == other_hi && std::isfinite(t.nodes[v].lo) && other_hi != kInf)
        lo = std::max(lo, t.nodes[v].lo - other_hi);
      if (other_lo == other_lo && std::isfinite(t.nodes[v].hi) && other_lo != -kInf)
        hi = std::min(hi, t.nodes[v].hi - other_lo);
      if (integral) {
        lo = round_up_int(lo);
        hi = round_down_int(hi);
      }
      if (lo > hi + kFeasTol) fail(ErrorCode::Infeasible, "empty interval at " + what);
    };
    for (int c : t.nodes[v].children)
      tighten(t.nodes[c].lo, t.nodes[c].hi, node_name(c));
    for (int i : t.nodes[v].direct_vars)
      tighten(t.var_lower[i], t.var_upper[i], "variable " + std::to_string(i + 1));
  }
  return t;
}

std::vector<double> feasible_fill(const LaminarTree& t, VariableDomain dom,
                                  std::mt19937_64* rng) {
  const int nn = static_cast<int>(t.nodes.size());
  const bool integral = dom == VariableDomain::Integer;
  std::vector<double> x(t.n, 0.0);
  std::vector<double> node_total(nn, 0.0);
  node_total[0] = t.R;

  struct Item {
    bool is_child;
    int id;
    double lo, hi;
  };

  for (int v = 0; v < nn; ++v) {
    std::vector<Item> items;
    for (int c : t.nodes[v].children) items.push_back({true, c, t.nodes[c].lo, t.nodes[c].hi});
    for (int i : t.nodes[v].direct_vars) items.push_back({false, i, t.var_lower[i], t.var_upper[i]});
    if (items.empty()) continue;
    if (rng) std::shuffle(items.begin(), items.end(), *rng);

    size_t k = items.size();
    std::vector<BoundSum> sufl(k + 1), sufu(k + 1);
    for (size_t p = k; p-- > 0;) {
      sufl[p] = sufl[p + 1];
      sufu[p] = sufu[p + 1];
      sufl[p].add(items[p].lo);
      sufu[p].add(items[p].hi);
    }

    double rem = node_total[v];
    for (size_t p = 0; p < k; ++p) {
      double rest_lo = sufl[p + 1].value();
      double rest_hi = sufu[p + 1].value();
      double flo = items[p].lo, fhi = items[p].hi;
      if (rest_hi != kInf) flo = std::max(flo, rem - rest_hi);
      if (rest_lo != -kInf) fhi = std::min(fhi, rem - rest_lo);
      if (integral) {
        flo = round_up_int(flo);
        fhi = round_down_int(fhi);
      }
      if (flo > fhi + kFeasTol)
        fail(ErrorCode::Infeasible, "no feasible fill at node item");
      double val;
      double cl = std::max(flo, -1e15), ch = std::min(fhi, 1e15);
      if (rng) {
        if (integral) {
          std::uniform_int_distribution<long long> d(static_cast<long long>(cl),
                                                     static_cast<long long>(ch));
          val = static_cast<double>(d(*rng));
        } else {
          std::uniform_real_distribution<double> d(cl, ch);
          val = d(*rng);
        }
      } else {
        val = detail::clampv(rem - (rest_lo == -kInf ? cl : rest_lo), cl, ch);
        if (integral) val = std::round(val);
      }
      // The last item must absorb the remainder exactly.
      if (p + 1 == k) val = detail::clampv(rem, flo, fhi);
      if (items[p].is_child) node_total[items[p].id] = val;
      else x[items[p].id] = val;
      rem -= val;
    }
  }
  return x;
}

// ---- exchange machinery ----------------------------------------------------

TreeIndex make_tree_index(const LaminarTree& tree) {
  TreeIndex idx;
  const int nn = static_cast<int>(tree.nodes.size());
  idx.node_in.assign(nn, 0);
  idx.node_out.assign(nn, 0);
  idx.var_slot.assign(tree.n, 0);
  int slot = 0;
  // Iterative DFS matching the stored parents-first layout.
  std::vector<int> stack{0};
  std::vector<int> state(nn, 0);
  std::vector<int> enter(nn, 0);
  while (!stack.empty()) {
    int v = stack.back();
    if (state[v] == 0) {
      enter[v] = slot;
      for (int i : tree.nodes[v].direct_vars) idx.var_slot[i] = slot++;
      state[v] = 1;
    }
    int nc = static_cast<int>(tree.nodes[v].children.size());
    if (state[v] - 1 < nc) {
      int c = tree.nodes[v].children[state[v] - 1];
      ++state[v];
      stack.push_back(c);
    } else {
      idx.node_in[v] = enter[v];
      idx.node_out[v] = slot;
      stack.pop_back();
    }
  }
  return idx;
}

bool pair_exchangeable(const LaminarTree& tree, const TreeIndex& idx,
                       const std::vector<double>& sums, const std::vector<double>& x,
                       int from, int to, VariableDomain dom, double strict_tol,
                       double* eps_max) {
  if (from == to) return false;
  const bool integral = dom == VariableDomain::Integer;
  const double need = integral ? 1.0 - strict_tol : strict_tol;

  double eps = kInf;
  auto pass = [&](double slack) {
    if (integral ? slack < need : slack <= need) return false;
    eps = std::min(eps, slack);
    return true;
  };

  if (!pass(x[from] - tree.var_lower[from])) return false;
  if (!pass(tree.var_upper[to] - x[to])) return false;

  for (int w = tree.owner[from]; w > 0; w = tree.nodes[w].parent) {
    if (idx.var_in_subtree(to, w)) break;  // reached the join, stop
    if (!pass(sums[w] - tree.nodes[w].lo)) return false;
  }
  for (int w = tree.owner[to]; w > 0; w = tree.nodes[w].parent) {
    if (idx.var_in_subtree(from, w)) break;
    if (!pass(tree.nodes[w].hi - sums[w])) return false;
  }
  if (eps_max) *eps_max = eps;
  return true;
}

// ---- conic decomposition ----------------------------------------------------

namespace {

void check_tree_feasible(const LaminarTree& tree, const std::vector<double>& x,
                         const char* which) {
  if (static_cast<int>(x.size()) != tree.n)
    fail(ErrorCode::DimensionMismatch, std::string(which) + " has wrong length");
  for (int i = 0; i < tree.n; ++i)
    if (x[i] < tree.var_lower[i] - kFeasTol || x[i] > tree.var_upper[i] + kFeasTol)
      fail(ErrorCode::InfeasiblePoint, std::string(which) + " violates a variable bound");
  auto s = tree.subtree_sums(x);
  for (size_t v = 0; v < tree.nodes.size(); ++v)
    if (s[v] < tree.nodes[v].lo - kFeasTol || s[v] > tree.nodes[v].hi + kFeasTol)
      fail(ErrorCode::InfeasiblePoint, std::string(which) + " violates a set bound");
}

}  // namespace

ConicDecomposition conic_decompose(const LaminarTree& tree, const std::vector<double>& x,
                                   const std::vector<double>& z) {
  check_tree_feasible(tree, x, "x");
  check_tree_feasible(tree, z, "z");
  const int n = tree.n;

  ConicDecomposition dec;
  dec.n = n;
  dec.lambda.assign(static_cast<size_t>(n) * n, 0.0);

  std::vector<double> cur = x;
  int t = 0;
  // Gaps at roundoff scale are artifacts of upstream summation, not real
  // transfers; a dust step would also sit on dust-thin set slack.
  auto open_gap = [&](int i) { return 1e-11 * std::max(1.0, std::abs(z[i])); };
  // Deepest sets first, the whole index set last.
  for (int v = static_cast<int>(tree.nodes.size()) - 1; v >= 0; --v) {
    std::vector<int> members = tree.subtree_vars(v);
    for (;;) {
      int from = -1, to = -1;
      for (int i : members) {
        if (from < 0 && cur[i] > z[i] + open_gap(i)) from = i;
        if (to < 0 && cur[i] < z[i] - open_gap(i)) to = i;
        if (from >= 0 && to >= 0) break;
      }
      if (from < 0 || to < 0) break;
      double give = cur[from] - z[from];
      double take = z[to] - cur[to];
      double amt = std::min(give, take);
      dec.lambda[static_cast<size_t>(from) * n + to] += amt;
      dec.trace.push_back({t++, from, to, amt});
      if (give <= take) cur[from] = z[from];
      else cur[from] -= amt;
      if (take <= give) cur[to] = z[to];
      else cur[to] += amt;
    }
  }
  return dec;
}

LemmaReport check_lemma_properties(const LaminarTree& tree, const std::vector<double>& x,
                                   const std::vector<double>& z,
                                   const ConicDecomposition& dec, VariableDomain dom) {
  LemmaReport rep;
  const int n = tree.n;
  auto flag = [&rep](bool& part, const std::string& msg) {
    part = false;
    rep.all_passed = false;
    rep.failures.push_back(msg);
  };

  const double scale = std::max(1.0, std::abs(tree.R));
  const double tol = 1e-9 * scale;

  TreeIndex idx = make_tree_index(tree);
  auto sums_x = tree.subtree_sums(x);

  // Deepest node containing both endpoints. A step whose pair straddles a
  // set boundary can only have been produced at a strict ancestor of that
  // set, so blocks touch a set's sum only once the walk has passed it; the
  // executable form of that invariant is that step joins never get deeper
  // again over the trace.
  auto join = [&](int i, int k) {
    int w = tree.owner[i];
    while (w > 0 && !idx.var_in_subtree(k, w)) w = tree.nodes[w].parent;
    return w;
  };

  std::vector<double> cur = x;
  std::unordered_set<long long> seen_pairs;
  int prev_join = static_cast<int>(tree.nodes.size());

  for (const auto& st : dec.trace) {
    if (st.amount <= 0.0) flag(rep.reconstructs, "nonpositive trace amount");
    if (cur[st.from] <= z[st.from] - tol || cur[st.to] >= z[st.to] + tol)
      flag(rep.monotone_coordinates, "transfer against the gap direction");

    long long key = static_cast<long long>(st.from) * n + st.to;
    if (!seen_pairs.insert(key).second)
      flag(rep.pairs_unique, "pair selected twice");

    int blk = join(st.from, st.to);
    if (blk > prev_join)
      flag(rep.subset_sums_invariant, "subset sum changed before its block");
    prev_join = std::min(prev_join, blk);

    cur[st.from] -= st.amount;
    cur[st.to] += st.amount;
    if (cur[st.from] < z[st.from] - tol || cur[st.to] > z[st.to] + tol)
      flag(rep.monotone_coordinates, "transfer overshoots the target");

    double total = detail::stable_sum(cur);
    if (std::abs(total - tree.R) > tol)
      flag(rep.conserved_totals, "intermediate point total drifted");
  }

  // Exact reconstruction from the weight matrix.
  std::vector<double> y = x;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double w = dec.lambda[static_cast<size_t>(i) * n + k];
      if (w < 0.0) flag(rep.reconstructs, "negative weight");
      y[i] -= w;
      y[k] += w;
    }
  for (int i = 0; i < n; ++i)
    if (std::abs(y[i] - z[i]) > tol) {
      flag(rep.reconstructs, "weights do not reconstruct z - x");
      break;
    }

  // Every positive pair is exchangeable at x; donors never receive and
  // receivers never donate.
  std::vector<char> donor(n, 0), receiver(n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double w = dec.lambda[static_cast<size_t>(i) * n + k];
      if (w <= 0.0) continue;
      donor[i] = 1;
      receiver[k] = 1;
      if (!pair_exchangeable(tree, idx, sums_x, x, i, k, dom, 1e-12))
        flag(rep.pairs_exchangeable, "positive-weight pair is not exchangeable");
    }
  for (int i = 0; i < n; ++i)
    if (donor[i] && receiver[i])
      flag(rep.partition_consistent, "index both donates and receives");

  return rep;
}

// ---- cross-free rewrite ------------------------------------------------------

bool is_cross_free(const std::vector<std::vector<int>>& sets, int n) {
  const int m = static_cast<int>(sets.size());
  std::vector<std::vector<char>> in(m, std::vector<char>(n, 0));
  for (int j = 0; j < m; ++j)
    for (int v : sets[j]) in[j][v] = 1;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      bool both = false, only_a = false, only_b = false, neither = false;
      for (int v = 0; v < n; ++v) {
        if (in[a][v] && in[b][v]) both = true;
        else if (in[a][v]) only_a = true;
        else if (in[b][v]) only_b = true;
        else neither = true;
      }
      if (both && only_a && only_b && neither) return false;
    }
  return true;
}

CrossFreeFamily laminar_to_crossfree(const ConstraintSpec& cons) {
  build_tree(cons);  // validates the family
  CrossFreeFamily fam;
  fam.n = cons.n;
  fam.R = cons.R;
  std::vector<char> member(cons.n, 0);
  for (int j = 0; j < cons.num_sets(); ++j) {
    const auto& s = cons.sets[j];
    fam.sets.push_back(s);
    fam.r.push_back(cons.set_upper[j]);
    std::fill(member.begin(), member.end(), 0);
    for (int v : s) member[v] = 1;
    std::vector<int> comp;
    for (int v = 0; v < cons.n; ++v)
      if (!member[v]) comp.push_back(v);
    fam.sets.push_back(std::move(comp));
    fam.r.push_back(cons.set_lower[j] == -kInf ? kInf : cons.R - cons.set_lower[j]);
  }
  fam.crossfree = is_cross_free(fam.sets, cons.n);
  return fam;
}

bool crossfree_feasible(const CrossFreeFamily& fam, const std::vector<double>& x, double tol) {
  if (static_cast<int>(x.size()) != fam.n) return false;
  if (std::abs(detail::stable_sum(x) - fam.R) > tol) return false;
  for (size_t j = 0; j < fam.sets.size(); ++j) {
    if (fam.r[j] == kInf) continue;
    double s = 0.0;
    for (int v : fam.sets[j]) s += x[v];
    if (s > fam.r[j] + tol) return false;
  }
  return true;
}

}  // namespace rapkit
