#include "rapkit/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "util.hpp"

namespace rapkit {

namespace {

struct Draw {
  std::mt19937_64 rng;
  explicit Draw(uint64_t seed) : rng(seed ^ 0x9e3779b97f4a7c15ull) {}
  double uni(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
  }
  long long uni_int(long long lo, long long hi) {
    std::uniform_int_distribution<long long> d(lo, hi);
    return d(rng);
  }
  bool chance(double p) { return uni(0.0, 1.0) < p; }
};

// Random laminar family over a shuffled index range: recursively split into
// blocks, emitting a set per recursion with some probability.
void gen_laminar_sets(Draw& d, const std::vector<int>& ids, int lo, int hi, int depth,
                      int* remaining, std::vector<std::vector<int>>* sets) {
  int len = hi - lo;
  if (len < 2 || *remaining <= 0) return;
  if (depth > 0 && d.chance(0.7) && *remaining > 0) {
    std::vector<int> s(ids.begin() + lo, ids.begin() + hi);
    std::sort(s.begin(), s.end());
    sets->push_back(std::move(s));
    --*remaining;
  }
  if (len < 4) return;
  int parts = static_cast<int>(d.uni_int(2, 3));
  std::vector<int> cuts{lo, hi};
  for (int p = 1; p < parts; ++p) cuts.push_back(lo + static_cast<int>(d.uni_int(1, len - 1)));
  std::sort(cuts.begin(), cuts.end());
  for (size_t p = 0; p + 1 < cuts.size(); ++p)
    if (cuts[p + 1] > cuts[p])
      gen_laminar_sets(d, ids, cuts[p], cuts[p + 1], depth + 1, remaining, sets);
}

}  // namespace

Instance random_instance(const GenSpec& spec) {
  Draw d(spec.seed);
  const int n = spec.n;
  const bool integral = spec.dom == VariableDomain::Integer;

  ObjectiveSpec obj;
  obj.a.resize(n);
  obj.b.resize(n);
  for (int i = 0; i < n; ++i) {
    obj.a[i] = d.uni(0.1, 10.0);
    obj.b[i] = d.uni(-5.0, 5.0);
  }

  ConstraintSpec cons;
  cons.n = n;
  cons.kind = spec.kind;
  cons.lower.resize(n);
  cons.upper.resize(n);
  std::vector<double> y(n);  // feasibility witness
  for (int i = 0; i < n; ++i) {
    if (integral) {
      long long l = d.uni_int(-6, 4);
      long long u = l + d.uni_int(0, spec.int_span);
      cons.lower[i] = static_cast<double>(l);
      cons.upper[i] = static_cast<double>(u);
      y[i] = static_cast<double>(d.uni_int(l, u));
    } else {
      double s = d.uni(-10.0, 10.0), t = d.uni(-10.0, 10.0);
      cons.lower[i] = std::min(s, t);
      cons.upper[i] = std::max(s, t);
      y[i] = d.uni(cons.lower[i], cons.upper[i]);
    }
  }
  cons.R = detail::stable_sum(y);

  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), d.rng);

  switch (spec.kind) {
    case ConstraintKind::Box:
      break;
    case ConstraintKind::Gbc: {
      int m = spec.m > 0 ? spec.m : std::max(2, static_cast<int>(std::sqrt(double(n))));
      m = std::min(m, n);
      cons.sets.assign(m, {});
      for (int i = 0; i < n; ++i) cons.sets[i % m].push_back(ids[i]);
      for (auto& s : cons.sets) std::sort(s.begin(), s.end());
      break;
    }
    case ConstraintKind::Nested: {
      int mmax = std::min(n - 1, spec.m > 0 ? spec.m : std::max(1, n / 3));
      std::vector<int> lens(n - 1);
      std::iota(lens.begin(), lens.end(), 1);
      std::shuffle(lens.begin(), lens.end(), d.rng);
      lens.resize(std::max(1, mmax));
      std::sort(lens.begin(), lens.end());
      lens.erase(std::unique(lens.begin(), lens.end()), lens.end());
      for (int len : lens) {
        std::vector<int> s(ids.begin(), ids.begin() + len);
        std::sort(s.begin(), s.end());
        cons.sets.push_back(std::move(s));
      }
      break;
    }
    case ConstraintKind::Laminar: {
      int budget = spec.m > 0 ? spec.m : std::max(1, n / 3);
      gen_laminar_sets(d, ids, 0, n, 0, &budget, &cons.sets);
      break;
    }
  }

  for (const auto& s : cons.sets) {
    double sum = 0.0;
    for (int v : s) sum += y[v];
    double lo, hi;
    if (integral) {
      sum = std::round(sum);
      long long slack_lo = d.chance(spec.tight_prob) ? 0 : d.uni_int(0, 4);
      long long slack_hi = d.chance(spec.tight_prob) ? 0 : d.uni_int(0, 4);
      lo = sum - static_cast<double>(slack_lo);
      hi = sum + static_cast<double>(slack_hi);
    } else {
      double span = 0.5 * std::sqrt(static_cast<double>(s.size()));
      lo = sum - (d.chance(spec.tight_prob) ? 0.0 : d.uni(0.0, 4.0 * span));
      hi = sum + (d.chance(spec.tight_prob) ? 0.0 : d.uni(0.0, 4.0 * span));
    }
    if (d.chance(spec.one_sided_prob)) {
      if (d.chance(0.5)) lo = -kInf;
      else hi = kInf;
    }
    cons.set_lower.push_back(lo);
    cons.set_upper.push_back(hi);
  }

  return validate_instance(std::move(obj), std::move(cons), spec.dom);
}

std::vector<double> random_feasible_point(const ConstraintSpec& cons, VariableDomain dom,
                                          uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ull);
  LaminarTree tight = propagate_bounds(build_tree(cons), dom);
  return feasible_fill(tight, dom, &rng);
}

ChainInstance random_chain_instance(int n, int m, uint64_t seed) {
  Draw d(seed);
  ChainInstance ci;
  ci.a.resize(n);
  ci.b.resize(n);
  ci.l.resize(n);
  ci.u.resize(n);
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    ci.a[i] = d.uni(0.1, 10.0);
    ci.b[i] = d.uni(-5.0, 5.0);
    double s = d.uni(-10.0, 10.0), t = d.uni(-10.0, 10.0);
    ci.l[i] = std::min(s, t);
    ci.u[i] = std::max(s, t);
    y[i] = d.uni(ci.l[i], ci.u[i]);
  }
  ci.R = detail::stable_sum(y);

  ci.chain.order.resize(n);
  std::iota(ci.chain.order.begin(), ci.chain.order.end(), 0);

  m = std::min(m, n - 1);
  std::vector<int> lens(n - 1);
  std::iota(lens.begin(), lens.end(), 1);
  std::shuffle(lens.begin(), lens.end(), d.rng);
  lens.resize(std::max(1, m));
  std::sort(lens.begin(), lens.end());
  lens.erase(std::unique(lens.begin(), lens.end()), lens.end());

  double run = 0.0;
  int pos = 0;
  for (int len : lens) {
    while (pos < len) run += y[pos++];
    // Slack scaled to the dispersion of a length-len prefix sum keeps the
    // expected number of binding prefixes small at any size.
    double span = 2.0 * std::sqrt(static_cast<double>(len)) + 0.5;
    ci.chain.prefix_len.push_back(len);
    ci.chain.L.push_back(run - d.uni(0.1, span));
    ci.chain.U.push_back(run + d.uni(0.1, span));
  }
  return ci;
}

}  // namespace rapkit
