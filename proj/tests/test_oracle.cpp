#include <cmath>

#include "doctest.h"
#include "rapkit/generator.hpp"
#include "rapkit/oracle.hpp"
#include "rapkit/qbox.hpp"
#include "rapkit/reduction.hpp"

using namespace rapkit;

namespace {

ConstraintSpec box(int n, double R, std::vector<double> l, std::vector<double> u) {
  ConstraintSpec c;
  c.n = n;
  c.R = R;
  c.kind = ConstraintKind::Box;
  c.lower = std::move(l);
  c.upper = std::move(u);
  return c;
}

const ObjectiveSpec kHalfSquares{{1, 1}, {0, 0}, std::nullopt};

}  // namespace

TEST_CASE("brute force finds the lexicographically smallest minimizer") {
  auto s = brute_force_integer(kHalfSquares, box(2, 3, {0, 0}, {3, 3}));
  CHECK(s.objective_value == doctest::Approx(2.5));
  CHECK(s.x == std::vector<double>{1, 2});
}

TEST_CASE("brute force rejects infeasible totals and respects forced points") {
  CHECK_THROWS_WITH_AS(brute_force_integer(kHalfSquares, box(2, 9, {0, 0}, {3, 3})),
                       doctest::Contains("INFEASIBLE"), Error);
  auto s = brute_force_integer(ObjectiveSpec{{1}, {0}, std::nullopt}, box(1, 2, {2}, {2}));
  CHECK(s.x == std::vector<double>{2});
}

TEST_CASE("brute force enforces its enumeration budget") {
  OracleBudget tiny;
  tiny.max_points = 8;
  CHECK_THROWS_WITH_AS(
      brute_force_integer(kHalfSquares, box(2, 3, {0, 0}, {3, 3}), tiny),
      doctest::Contains("BUDGET_EXCEEDED"), Error);
}

TEST_CASE("greedy matches the threshold solver on boxes") {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    GenSpec gs;
    gs.kind = ConstraintKind::Box;
    gs.dom = VariableDomain::Integer;
    gs.n = 2 + static_cast<int>(seed % 6);
    gs.seed = seed;
    Instance inst = random_instance(gs);
    auto g = greedy_integer(inst.obj, inst.cons);
    auto t = solve_qbox_integer(inst.obj.a, inst.obj.b, inst.cons.lower, inst.cons.upper,
                                inst.cons.R);
    CHECK(g.objective_value == doctest::Approx(t.objective_value).epsilon(1e-12));
  }
}

TEST_CASE("greedy matches brute force on upper-bounded chains") {
  ConstraintSpec c = box(3, 5, {0, 0, 0}, {4, 4, 4});
  c.kind = ConstraintKind::Nested;
  c.sets = {{0}, {0, 1}};
  c.set_lower = {-kInf, -kInf};
  c.set_upper = {1, 3};
  ObjectiveSpec obj{{1, 2, 3}, {0.3, -0.4, 0.1}, std::nullopt};
  auto g = greedy_integer(obj, c);
  auto bf = brute_force_integer(obj, c);
  CHECK(g.objective_value == doctest::Approx(bf.objective_value));
}

TEST_CASE("greedy refuses set lower bounds above the variable floor") {
  ConstraintSpec c = box(3, 5, {0, 0, 0}, {4, 4, 4});
  c.kind = ConstraintKind::Nested;
  c.sets = {{0, 1}};
  c.set_lower = {1};
  c.set_upper = {kInf};
  CHECK_THROWS_WITH_AS(greedy_integer(ObjectiveSpec{{1, 1, 1}, {0, 0, 0}, std::nullopt}, c),
                       doctest::Contains("GREEDY_UNSAFE"), Error);
}

TEST_CASE("grid refinement on the symmetric box") {
  auto s = grid_refine_continuous(kHalfSquares, box(2, 2, {0, 0}, {2, 2}));
  CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(s.x[1] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("grid refinement reproduces the chain example") {
  ConstraintSpec c = box(3, 3, {0, 0, 0}, {3, 3, 3});
  c.kind = ConstraintKind::Nested;
  c.sets = {{0}};
  c.set_lower = {-kInf};
  c.set_upper = {0.5};
  auto s = grid_refine_continuous(ObjectiveSpec{{1, 1, 1}, {0, 0, 0}, std::nullopt}, c);
  CHECK(s.x[0] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(s.x[1] == doctest::Approx(1.25).epsilon(1e-4));
  CHECK(s.x[2] == doctest::Approx(1.25).epsilon(1e-4));
}

TEST_CASE("grid refinement confirms interior stationarity") {
  auto s = grid_refine_continuous(ObjectiveSpec{{1, 2}, {0, 0}, std::nullopt},
                                  box(2, 3, {-10, -10}, {10, 10}));
  CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(s.x[1] == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("grid refinement is limited to four variables") {
  CHECK_THROWS_WITH_AS(
      grid_refine_continuous(ObjectiveSpec{{1, 1, 1, 1, 1}, {0, 0, 0, 0, 0}, std::nullopt},
                             box(5, 2, {0, 0, 0, 0, 0}, {1, 1, 1, 1, 1})),
      doctest::Contains("BUDGET_EXCEEDED"), Error);
}

TEST_CASE("solvers agree with the grid oracle on small strictly convex instances") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    GenSpec gs;
    gs.kind = static_cast<ConstraintKind>(seed % 4);
    gs.n = 2 + static_cast<int>(seed % 3);
    gs.seed = 1200 + seed;
    Instance inst = random_instance(gs);
    Solution s = solve_quadratic(inst);
    Solution g = grid_refine_continuous(inst.obj, inst.cons);
    for (int i = 0; i < inst.cons.n; ++i)
      CHECK(std::abs(s.x[i] - g.x[i]) <= 1e-4);
  }
}

TEST_CASE("solver objectives equal brute force on random small integer instances") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    GenSpec gs;
    gs.kind = static_cast<ConstraintKind>(seed % 4);
    gs.dom = VariableDomain::Integer;
    gs.n = 2 + static_cast<int>(seed % 5);
    gs.int_span = 5;
    gs.seed = 1300 + seed;
    Instance inst = random_instance(gs);
    Solution s = solve_quadratic(inst);
    Solution bf = brute_force_integer(inst.obj, inst.cons);
    CHECK(s.objective_value == doctest::Approx(bf.objective_value).epsilon(1e-12));
  }
}
