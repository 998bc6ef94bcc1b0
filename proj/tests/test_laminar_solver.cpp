#include <cmath>

#include "doctest.h"
#include "rapkit/generator.hpp"
#include "rapkit/laminar_solver.hpp"
#include "rapkit/model.hpp"
#include "rapkit/oracle.hpp"
#include "rapkit/qbox.hpp"
#include "rapkit/reduction.hpp"

using namespace rapkit;

TEST_CASE("gbc with fully pinned singleton groups") {
  auto s = solve_gbc({1, 1}, {0, 0}, {0, 0}, {5, 5}, {{0}, {1}}, {1, 2}, {1, 2}, 3,
                     VariableDomain::Continuous);
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(2.0));
  CHECK_THROWS_WITH_AS(solve_gbc({1, 1}, {0, 0}, {0, 0}, {5, 5}, {{0}, {1}}, {1, 2}, {1, 2}, 4,
                                 VariableDomain::Continuous),
                       doctest::Contains("INFEASIBLE"), Error);
}

TEST_CASE("gbc splits mass around a binding group cap") {
  auto s = solve_gbc({1, 1, 1, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}, {10, 10, 10, 10},
                     {{0, 1}, {2, 3}}, {-kInf, -kInf}, {1, kInf}, 4,
                     VariableDomain::Continuous);
  CHECK(s.x[0] == doctest::Approx(0.5));
  CHECK(s.x[1] == doctest::Approx(0.5));
  CHECK(s.x[2] == doctest::Approx(1.5));
  CHECK(s.x[3] == doctest::Approx(1.5));
  CHECK(s.certified);
  CHECK(*s.lambda == doctest::Approx(1.5));
}

TEST_CASE("integer gbc matches brute force") {
  auto s = solve_gbc({1, 1, 1, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}, {10, 10, 10, 10},
                     {{0, 1}, {2, 3}}, {-kInf, -kInf}, {1, kInf}, 4, VariableDomain::Integer);
  CHECK(s.x == std::vector<double>{1, 0, 2, 1});

  ConstraintSpec c;
  c.n = 4;
  c.R = 4;
  c.kind = ConstraintKind::Gbc;
  c.lower.assign(4, 0);
  c.upper.assign(4, 10);
  c.sets = {{0, 1}, {2, 3}};
  c.set_lower = {-kInf, -kInf};
  c.set_upper = {1, kInf};
  auto bf = brute_force_integer(ObjectiveSpec{{1, 1, 1, 1}, {0, 0, 0, 0}, std::nullopt}, c);
  CHECK(s.objective_value == doctest::Approx(bf.objective_value));
}

TEST_CASE("laminar solve of the single-cap chain example") {
  ConstraintSpec c;
  c.n = 3;
  c.R = 3;
  c.kind = ConstraintKind::Nested;
  c.lower.assign(3, 0);
  c.upper.assign(3, 3);
  c.sets = {{0}};
  c.set_lower = {-kInf};
  c.set_upper = {0.5};
  auto s = solve_laminar({1, 1, 1}, {0, 0, 0}, c, VariableDomain::Continuous);
  CHECK(s.x[0] == doctest::Approx(0.5));
  CHECK(s.x[1] == doctest::Approx(1.25));
  CHECK(s.x[2] == doctest::Approx(1.25));
  CHECK(s.certified);
}

TEST_CASE("slack families return the box relaxation unchanged") {
  ConstraintSpec c;
  c.n = 2;
  c.R = 2;
  c.kind = ConstraintKind::Laminar;
  c.lower = {0, 0};
  c.upper = {2, 2};
  c.sets = {{0}};
  c.set_lower = {-10};
  c.set_upper = {10};
  auto s = solve_laminar({1, 1}, {0, 0}, c, VariableDomain::Continuous);
  auto r = solve_qbox_continuous({1, 1}, {0, 0}, {0, 0}, {2, 2}, 2);
  CHECK(s.x[0] == doctest::Approx(r.x[0]));
  CHECK(s.x[1] == doctest::Approx(r.x[1]));
  CHECK(s.lambda.has_value());
}

TEST_CASE("two-sided laminar example") {
  ConstraintSpec c;
  c.n = 4;
  c.R = 4;
  c.kind = ConstraintKind::Laminar;
  c.lower.assign(4, 0);
  c.upper.assign(4, 2);
  c.sets = {{0, 1}, {0, 1, 2}};
  c.set_lower = {-kInf, 3};
  c.set_upper = {1, kInf};
  auto s = solve_laminar({1, 1, 1, 1}, {0, 0, 0, 0}, c, VariableDomain::Continuous);
  CHECK(s.x[0] == doctest::Approx(0.5));
  CHECK(s.x[1] == doctest::Approx(0.5));
  CHECK(s.x[2] == doctest::Approx(2.0));
  CHECK(s.x[3] == doctest::Approx(1.0));
  CHECK(s.certified);
  // both sets end up tight
  CHECK(s.tight_sets == std::vector<int>{0, 1});
}

TEST_CASE("nested fast agrees with the laminar route") {
  for (uint64_t seed = 0; seed < 80; ++seed) {
    GenSpec gs;
    gs.kind = ConstraintKind::Nested;
    gs.n = 3 + static_cast<int>(seed % 20);
    gs.seed = 3000 + seed;
    gs.dom = seed % 3 == 0 ? VariableDomain::Integer : VariableDomain::Continuous;
    Instance inst = random_instance(gs);
    NestedChain chain = to_nested_chain(inst.cons);
    Solution fast = solve_nested_fast(inst.obj.a, inst.obj.b, inst.cons.lower, inst.cons.upper,
                                      chain, inst.cons.R, inst.dom);
    Solution lam = solve_laminar(inst.obj.a, inst.obj.b, inst.cons, inst.dom);
    if (inst.dom == VariableDomain::Continuous) {
      for (int i = 0; i < inst.cons.n; ++i) CHECK(std::abs(fast.x[i] - lam.x[i]) <= 1e-8);
    } else {
      CHECK(fast.objective_value == doctest::Approx(lam.objective_value).epsilon(1e-12));
    }
  }
}

TEST_CASE("gbc agrees with the laminar route") {
  for (uint64_t seed = 0; seed < 80; ++seed) {
    GenSpec gs;
    gs.kind = ConstraintKind::Gbc;
    gs.n = 3 + static_cast<int>(seed % 20);
    gs.seed = 4000 + seed;
    gs.dom = seed % 3 == 0 ? VariableDomain::Integer : VariableDomain::Continuous;
    Instance inst = random_instance(gs);
    Solution g = solve_gbc(inst.obj.a, inst.obj.b, inst.cons.lower, inst.cons.upper,
                           inst.cons.sets, inst.cons.set_lower, inst.cons.set_upper,
                           inst.cons.R, inst.dom);
    Solution lam = solve_laminar(inst.obj.a, inst.obj.b, inst.cons, inst.dom);
    if (inst.dom == VariableDomain::Continuous) {
      for (int i = 0; i < inst.cons.n; ++i) CHECK(std::abs(g.x[i] - lam.x[i]) <= 1e-8);
    } else {
      CHECK(g.objective_value == doctest::Approx(lam.objective_value).epsilon(1e-12));
    }
  }
}

TEST_CASE("fully pinned chains telescope") {
  // prefixes pinned to 1 and 3: x = (1, 2, 3) with total 6
  NestedChain chain;
  chain.order = {0, 1, 2};
  chain.prefix_len = {1, 2};
  chain.L = {1, 3};
  chain.U = {1, 3};
  auto s = solve_nested_fast({1, 1, 1}, {0, 0, 0}, {0, 0, 0}, {10, 10, 10}, chain, 6,
                             VariableDomain::Continuous);
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(2.0));
  CHECK(s.x[2] == doctest::Approx(3.0));
  CHECK(s.tight_sets == std::vector<int>{0, 1});
}

TEST_CASE("chains with slack reduce to the box solution") {
  NestedChain chain;
  chain.order = {0, 1, 2};
  chain.prefix_len = {1};
  chain.L = {-100};
  chain.U = {100};
  auto s = solve_nested_fast({1, 1, 1}, {0, 0, 0}, {0, 0, 0}, {3, 3, 3}, chain, 3,
                             VariableDomain::Continuous);
  auto r = solve_qbox_continuous({1, 1, 1}, {0, 0, 0}, {0, 0, 0}, {3, 3, 3}, 3);
  for (int i = 0; i < 3; ++i) CHECK(s.x[i] == doctest::Approx(r.x[i]));
}

TEST_CASE("every laminar-family output carries a certificate") {
  for (uint64_t seed = 0; seed < 120; ++seed) {
    GenSpec gs;
    gs.kind = static_cast<ConstraintKind>(1 + seed % 3);
    gs.n = 2 + static_cast<int>(seed % 24);
    gs.seed = 5000 + seed;
    gs.dom = seed % 2 ? VariableDomain::Integer : VariableDomain::Continuous;
    Instance inst = random_instance(gs);
    Solution s = solve_quadratic(inst);
    CHECK(s.certified);
    CHECK(check_feasibility(inst.cons, s.x).feasible);
    // tight sets satisfy their bound with equality
    for (int j : s.tight_sets) {
      double sum = 0;
      for (int v : inst.cons.sets[j]) sum += s.x[v];
      bool lo = std::abs(sum - inst.cons.set_lower[j]) <= 1e-7;
      bool hi = std::abs(sum - inst.cons.set_upper[j]) <= 1e-7;
      CHECK((lo || hi));
    }
  }
}

TEST_CASE("integer laminar matches brute force") {
  for (uint64_t seed = 0; seed < 80; ++seed) {
    GenSpec gs;
    gs.kind = ConstraintKind::Laminar;
    gs.dom = VariableDomain::Integer;
    gs.n = 2 + static_cast<int>(seed % 5);
    gs.int_span = 5;
    gs.seed = 6000 + seed;
    Instance inst = random_instance(gs);
    Solution s = solve_quadratic(inst);
    Solution bf = brute_force_integer(inst.obj, inst.cons);
    CHECK(s.objective_value == doctest::Approx(bf.objective_value).epsilon(1e-12));
  }
}
