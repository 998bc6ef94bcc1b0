#include <random>

#include "doctest.h"
#include "rapkit/generator.hpp"
#include "rapkit/laminar_tree.hpp"
#include "rapkit/model.hpp"

using namespace rapkit;

namespace {

ConstraintSpec laminar(int n, double R, std::vector<std::vector<int>> sets,
                       std::vector<double> L, std::vector<double> U,
                       std::vector<double> l = {}, std::vector<double> u = {}) {
  ConstraintSpec c;
  c.n = n;
  c.R = R;
  c.kind = ConstraintKind::Laminar;
  c.sets = std::move(sets);
  c.set_lower = std::move(L);
  c.set_upper = std::move(U);
  c.lower = std::move(l);
  c.upper = std::move(u);
  return c;
}

}  // namespace

TEST_CASE("chain builds a path tree") {
  auto c = laminar(3, 1, {{0}, {0, 1}}, {0, 0}, {1, 1}, {0, 0, 0}, {1, 1, 1});
  LaminarTree t = build_tree(c);
  REQUIRE(t.nodes.size() == 3);
  CHECK(t.nodes[0].parent == -1);
  CHECK(t.nodes[1].parent == 0);   // {0,1}
  CHECK(t.nodes[2].parent == 1);   // {0}
  CHECK(t.nodes[0].direct_vars == std::vector<int>{2});
  CHECK(t.nodes[1].direct_vars == std::vector<int>{1});
  CHECK(t.nodes[2].direct_vars == std::vector<int>{0});
}

TEST_CASE("crossing sets are rejected") {
  auto c = laminar(3, 1, {{0, 1}, {1, 2}}, {0, 0}, {1, 1});
  CHECK_THROWS_WITH_AS(build_tree(c), doctest::Contains("MALFORMED_FAMILY"), Error);
}

TEST_CASE("duplicate sets are rejected") {
  auto c = laminar(3, 1, {{0, 1}, {0, 1}}, {0, 0}, {1, 1});
  CHECK_THROWS_WITH_AS(build_tree(c), doctest::Contains("MALFORMED_FAMILY"), Error);
}

TEST_CASE("a partition becomes siblings under the root") {
  auto c = laminar(4, 1, {{0, 1}, {2, 3}}, {0, 0}, {1, 1});
  LaminarTree t = build_tree(c);
  REQUIRE(t.nodes.size() == 3);
  CHECK(t.nodes[1].parent == 0);
  CHECK(t.nodes[2].parent == 0);
}

TEST_CASE("a full set folds into the root interval") {
  auto c = laminar(2, 3, {{0, 1}}, {0}, {2});
  LaminarTree t = build_tree(c);
  REQUIRE(t.nodes.size() == 1);
  // Root interval [3,3] meets [0,2]: propagation must report infeasibility.
  CHECK_THROWS_WITH_AS(propagate_bounds(t), doctest::Contains("INFEASIBLE"), Error);
}

TEST_CASE("propagation flags the emptied node") {
  // Child pinned to 5 under a parent capped at 3.
  auto c = laminar(3, 3, {{0}, {0, 1}}, {5, -kInf}, {5, 3}, {0, 0, 0}, {10, 10, 10});
  CHECK_THROWS_WITH_AS(propagate_bounds(build_tree(c)), doctest::Contains("set 2"), Error);
}

TEST_CASE("slack set bounds reduce to the implied interval") {
  auto c = laminar(3, 1.5, {{0, 1}}, {-10}, {10}, {0, 0, 0}, {1, 1, 1});
  LaminarTree t = propagate_bounds(build_tree(c));
  // box and total imply [R - u3, R - l3] = [0.5, 1.5]; the slack set bound
  // contributes nothing, and propagating again changes nothing
  CHECK(t.nodes[1].lo == doctest::Approx(0.5));
  CHECK(t.nodes[1].hi == doctest::Approx(1.5));
  LaminarTree t2 = propagate_bounds(t);
  CHECK(t2.nodes[1].lo == doctest::Approx(t.nodes[1].lo));
  CHECK(t2.nodes[1].hi == doctest::Approx(t.nodes[1].hi));
}

TEST_CASE("telescoping equalities collapse intervals to points") {
  // Chain pinning: {0} = 1, {0,1} = 3 forces x1 = 2; total 6 forces x2 = 3.
  auto c = laminar(3, 6, {{0}, {0, 1}}, {1, 3}, {1, 3}, {0, 0, 0}, {10, 10, 10});
  LaminarTree t = propagate_bounds(build_tree(c));
  CHECK(t.var_lower[1] == doctest::Approx(2.0));
  CHECK(t.var_upper[1] == doctest::Approx(2.0));
  CHECK(t.var_lower[2] == doctest::Approx(3.0));
  CHECK(t.var_upper[2] == doctest::Approx(3.0));
}

TEST_CASE("feasible fill lands inside every interval") {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    GenSpec gs;
    gs.kind = static_cast<ConstraintKind>(seed % 4);
    gs.dom = seed % 2 ? VariableDomain::Integer : VariableDomain::Continuous;
    gs.n = 4 + static_cast<int>(seed % 9);
    gs.seed = 100 + seed;
    Instance inst = random_instance(gs);
    auto x = random_feasible_point(inst.cons, inst.dom, seed);
    CHECK(check_feasibility(inst.cons, x).feasible);
    if (inst.dom == VariableDomain::Integer)
      for (double v : x) CHECK(v == doctest::Approx(std::round(v)));
  }
}

TEST_CASE("conic decomposition: identical points yield an empty trace") {
  auto c = laminar(2, 2, {}, {}, {}, {0, 0}, {2, 2});
  LaminarTree t = build_tree(c);
  auto dec = conic_decompose(t, {1, 1}, {1, 1});
  CHECK(dec.trace.empty());
  for (double w : dec.lambda) CHECK(w == 0.0);
}

TEST_CASE("conic decomposition: a single exchange closes both gaps") {
  auto c = laminar(2, 2, {}, {}, {}, {0, 0}, {2, 2});
  auto dec = conic_decompose(build_tree(c), {1, 1}, {0, 2});
  REQUIRE(dec.trace.size() == 1);
  CHECK(dec.trace[0].from == 0);
  CHECK(dec.trace[0].to == 1);
  CHECK(dec.weight(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("conic decomposition walks subsets deepest first") {
  auto c = laminar(3, 3, {{0, 1}}, {-10}, {10}, {0, 0, 0}, {3, 3, 3});
  auto dec = conic_decompose(build_tree(c), {2, 0, 1}, {1, 1, 1});
  REQUIRE(dec.trace.size() == 1);
  CHECK(dec.trace[0].from == 0);
  CHECK(dec.trace[0].to == 1);
  CHECK(dec.weight(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("decomposing an infeasible point is rejected") {
  auto c = laminar(2, 2, {}, {}, {}, {0, 0}, {2, 2});
  CHECK_THROWS_WITH_AS(conic_decompose(build_tree(c), {3, -1}, {1, 1}),
                       doctest::Contains("INFEASIBLE_POINT"), Error);
}

TEST_CASE("lemma checks pass on valid decompositions and catch corruption") {
  auto c = laminar(3, 3, {{0, 1}}, {-10}, {10}, {0, 0, 0}, {3, 3, 3});
  LaminarTree t = build_tree(c);
  std::vector<double> x{2, 0, 1}, z{1, 1, 1};
  auto dec = conic_decompose(t, x, z);
  auto rep = check_lemma_properties(t, x, z, dec);
  CHECK(rep.all_passed);

  auto bad = dec;
  bad.lambda[0 * 3 + 1] = -bad.lambda[0 * 3 + 1];
  auto rep2 = check_lemma_properties(t, x, z, bad);
  CHECK(!rep2.reconstructs);
  CHECK(!rep2.all_passed);
}

TEST_CASE("randomized decompositions satisfy every lemma part") {
  std::mt19937_64 rng(11);
  for (uint64_t seed = 0; seed < 100; ++seed) {
    GenSpec gs;
    gs.kind = seed % 2 ? ConstraintKind::Laminar : ConstraintKind::Nested;
    gs.dom = seed % 3 == 0 ? VariableDomain::Integer : VariableDomain::Continuous;
    gs.n = 4 + static_cast<int>(seed % 8);
    gs.seed = 500 + seed;
    Instance inst = random_instance(gs);
    LaminarTree t = build_tree(inst.cons);
    auto x = random_feasible_point(inst.cons, inst.dom, 2 * seed);
    auto z = random_feasible_point(inst.cons, inst.dom, 2 * seed + 1);
    auto dec = conic_decompose(t, x, z);
    auto rep = check_lemma_properties(t, x, z, dec, inst.dom);
    if (!rep.all_passed)
      for (const auto& msg : rep.failures) MESSAGE("seed ", seed, ": ", msg);
    CHECK(rep.all_passed);
    // loose trace caps: n per block accounting, n*(m+1) overall
    CHECK(dec.trace.size() <= static_cast<size_t>(inst.cons.n) *
                                  (inst.cons.num_sets() + 1));
    CHECK(dec.trace.size() <= static_cast<size_t>(inst.cons.n) - 1 +
                                  static_cast<size_t>(inst.cons.num_sets()) * inst.cons.n);
  }
}

TEST_CASE("donors, receivers and bystanders partition the indices") {
  GenSpec gs;
  gs.kind = ConstraintKind::Laminar;
  gs.n = 8;
  gs.seed = 77;
  Instance inst = random_instance(gs);
  LaminarTree t = build_tree(inst.cons);
  auto x = random_feasible_point(inst.cons, inst.dom, 1);
  auto z = random_feasible_point(inst.cons, inst.dom, 2);
  auto dec = conic_decompose(t, x, z);
  int n = inst.cons.n;
  for (int i = 0; i < n; ++i) {
    bool donor = false, receiver = false;
    for (int k = 0; k < n; ++k) {
      if (dec.weight(i, k) > 0) donor = true;
      if (dec.weight(k, i) > 0) receiver = true;
    }
    CHECK(!(donor && receiver));
  }
}

TEST_CASE("cross-free rewrite of a chain") {
  auto c = laminar(3, 1, {{0}, {0, 1}}, {0.25, 0.5}, {0.75, 0.9});
  auto fam = laminar_to_crossfree(c);
  CHECK(fam.crossfree);
  REQUIRE(fam.sets.size() == 4);
  CHECK(fam.sets[0] == std::vector<int>{0});
  CHECK(fam.sets[1] == std::vector<int>{1, 2});
  CHECK(fam.sets[2] == std::vector<int>{0, 1});
  CHECK(fam.sets[3] == std::vector<int>{2});
  CHECK(fam.r[0] == doctest::Approx(0.75));
  CHECK(fam.r[1] == doctest::Approx(1 - 0.25));
  CHECK(fam.r[2] == doctest::Approx(0.9));
  CHECK(fam.r[3] == doctest::Approx(1 - 0.5));
}

TEST_CASE("empty family is vacuously cross-free") {
  auto fam = laminar_to_crossfree(laminar(3, 1, {}, {}, {}));
  CHECK(fam.crossfree);
  CHECK(fam.sets.empty());
}

TEST_CASE("the cross-free checker rejects a synthetic crossing pair") {
  // in a 3-element universe these two cover everything and do not cross
  CHECK(is_cross_free({{0, 1}, {1, 2}}, 3));
  // with a fourth element all four mutual regions are nonempty
  CHECK(!is_cross_free({{0, 1}, {1, 2}}, 4));
  CHECK(is_cross_free({{0}, {0, 1}, {1, 2, 0}}, 4));
}

TEST_CASE("membership equivalence between the family and its rewrite") {
  std::mt19937_64 rng(3);
  for (uint64_t seed = 0; seed < 30; ++seed) {
    GenSpec gs;
    gs.kind = ConstraintKind::Laminar;
    gs.n = 5 + static_cast<int>(seed % 6);
    gs.seed = 900 + seed;
    Instance inst = random_instance(gs);
    auto fam = laminar_to_crossfree(inst.cons);
    CHECK(fam.crossfree);
    for (int trial = 0; trial < 60; ++trial) {
      std::vector<double> x(inst.cons.n);
      if (trial % 2 == 0) {
        x = random_feasible_point(inst.cons, inst.dom, seed * 100 + trial);
        if (trial % 4 == 2) x[0] += 0.37;  // nudge some feasible points out
      } else {
        std::uniform_real_distribution<double> d(-12.0, 12.0);
        for (auto& v : x) v = d(rng);
      }
      // Rewrite carries the set bounds only; compare with the box dropped.
      ConstraintSpec no_box = inst.cons;
      no_box.lower.assign(no_box.n, -kInf);
      no_box.upper.assign(no_box.n, kInf);
      CHECK(check_feasibility(no_box, x).feasible == crossfree_feasible(fam, x));
    }
  }
}
