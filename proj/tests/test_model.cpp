#include <cmath>

#include "doctest.h"
#include "rapkit/catalog.hpp"
#include "rapkit/generator.hpp"
#include "rapkit/model.hpp"
#include "rapkit/tree_index.hpp"

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

ObjectiveSpec quad(std::vector<double> a, std::vector<double> b) {
  return ObjectiveSpec{std::move(a), std::move(b), std::nullopt};
}

// Literal definition of exchangeability: try a small shift and recheck.
bool shift_feasible(const ConstraintSpec& cons, std::vector<double> x, int i, int k,
                    double eps) {
  x[i] -= eps;
  x[k] += eps;
  return check_feasibility(cons, x, 1e-12).feasible;
}

}  // namespace

TEST_CASE("validate accepts a minimal well-formed instance") {
  Instance inst = validate_instance(quad({1, 1}, {0, 0}), box(2, 1, {0, 0}, {1, 1}),
                                    VariableDomain::Continuous);
  CHECK(inst.cons.n == 2);
}

TEST_CASE("validate rejects nonpositive scales") {
  CHECK_THROWS_WITH_AS(validate_instance(quad({1, -1}, {0, 0}), box(2, 1, {0, 0}, {1, 1}),
                                         VariableDomain::Continuous),
                       doctest::Contains("NONPOSITIVE_SCALE"), Error);
}

TEST_CASE("validate rejects objectives undefined on the feasible box") {
  ObjectiveSpec obj = quad({1, 1}, {0, 0});
  obj.f = catalog::neg_log();
  // x1 can be 0, so x1/a1 + b1 = 0 leaves the open domain (0, inf).
  CHECK_THROWS_WITH_AS(
      validate_instance(obj, box(2, 5, {0, 5}, {5, 5}), VariableDomain::Continuous),
      doctest::Contains("DOMAIN_VIOLATION"), Error);
}

TEST_CASE("validate rejects dimension mismatches") {
  CHECK_THROWS_AS(validate_instance(quad({1, 1, 1}, {0, 0}), box(2, 1, {0, 0}, {1, 1}),
                                    VariableDomain::Continuous),
                  Error);
}

TEST_CASE("validate rejects crossing families and bad partitions") {
  ConstraintSpec c = box(3, 1, {0, 0, 0}, {1, 1, 1});
  c.kind = ConstraintKind::Laminar;
  c.sets = {{0, 1}, {1, 2}};
  c.set_lower = {0, 0};
  c.set_upper = {1, 1};
  CHECK_THROWS_WITH_AS(validate_instance(quad({1, 1, 1}, {0, 0, 0}), c, VariableDomain::Continuous),
                       doctest::Contains("MALFORMED_FAMILY"), Error);

  ConstraintSpec g = box(3, 1, {0, 0, 0}, {1, 1, 1});
  g.kind = ConstraintKind::Gbc;
  g.sets = {{0, 1}};  // does not cover variable 3
  g.set_lower = {0};
  g.set_upper = {1};
  CHECK_THROWS_WITH_AS(validate_instance(quad({1, 1, 1}, {0, 0, 0}), g, VariableDomain::Continuous),
                       doctest::Contains("MALFORMED_FAMILY"), Error);
}

TEST_CASE("integer validation rounds bounds inward") {
  Instance inst = validate_instance(quad({1, 1}, {0, 0}), box(2, 2, {-0.7, 0.3}, {1.9, 2.0}),
                                    VariableDomain::Integer);
  CHECK(inst.cons.lower == std::vector<double>{0.0, 1.0});
  CHECK(inst.cons.upper == std::vector<double>{1.0, 2.0});
}

TEST_CASE("objective evaluation") {
  CHECK(evaluate_objective(quad({1, 1}, {0, 0}), {1, 1}) == doctest::Approx(1.0));
  CHECK(evaluate_objective(quad({2, 1}, {1, 0}), {2, 2}) == doctest::Approx(5.0));
  ObjectiveSpec e = quad({1}, {0});
  e.f = catalog::exponential();
  CHECK(evaluate_objective(e, {0}) == doctest::Approx(1.0));
}

TEST_CASE("evaluation outside the domain of f fails") {
  ObjectiveSpec e = quad({1}, {0});
  e.f = catalog::neg_log();
  CHECK_THROWS_WITH_AS(evaluate_objective(e, {-1}), doctest::Contains("DOMAIN_VIOLATION"), Error);
}

TEST_CASE("feasibility report") {
  ConstraintSpec c = box(2, 2, {0, 0}, {2, 2});
  CHECK(check_feasibility(c, {1, 1}).feasible);

  auto rep = check_feasibility(c, {2, 2});
  CHECK(!rep.feasible);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].type == Violation::Type::Resource);
  CHECK(rep.violations[0].residual == doctest::Approx(2.0));

  ConstraintSpec nc = box(3, 2, {0, 0, 0}, {3, 3, 3});
  nc.kind = ConstraintKind::Nested;
  nc.sets = {{0}};
  nc.set_lower = {-kInf};
  nc.set_upper = {0.5};
  auto rep2 = check_feasibility(nc, {1, 0.5, 0.5});
  CHECK(!rep2.feasible);
  REQUIRE(rep2.violations.size() == 1);
  CHECK(rep2.violations[0].type == Violation::Type::SetUpper);
  CHECK(rep2.violations[0].residual == doctest::Approx(0.5));
}

TEST_CASE("exchangeable pairs over a box") {
  ConstraintSpec c = box(2, 2, {0, 0}, {2, 2});
  auto g = exchangeable_pairs(c, {1, 1}, VariableDomain::Continuous);
  CHECK(g.pairs.size() == 2);
  CHECK(g.contains(0, 1));
  CHECK(g.contains(1, 0));
  for (const auto& p : g.pairs) CHECK(p.eps_max == doctest::Approx(1.0));

  auto g2 = exchangeable_pairs(c, {0, 2}, VariableDomain::Continuous);
  CHECK(g2.pairs.size() == 1);
  CHECK(g2.contains(1, 0));
  CHECK(g2.pairs[0].eps_max > 0.0);
}

TEST_CASE("an equality wall blocks exchanges across it") {
  ConstraintSpec c = box(3, 2, {0, 0, 0}, {3, 3, 3});
  c.kind = ConstraintKind::Nested;
  c.sets = {{0}};
  c.set_lower = {1};
  c.set_upper = {1};
  std::vector<double> x{1, 0.5, 0.5};
  auto g = exchangeable_pairs(c, x, VariableDomain::Continuous);
  CHECK(g.pairs.size() == 2);
  CHECK(g.contains(1, 2));
  CHECK(g.contains(2, 1));
  // Cross-check against the literal shift definition.
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      if (i == k) continue;
      CHECK(g.contains(i, k) == shift_feasible(c, x, i, k, 1e-6));
    }
}

TEST_CASE("exchangeable pairs demand a feasible point") {
  ConstraintSpec c = box(2, 2, {0, 0}, {2, 2});
  CHECK_THROWS_WITH_AS(exchangeable_pairs(c, {3, -1}, VariableDomain::Continuous),
                       doctest::Contains("INFEASIBLE_POINT"), Error);
}

TEST_CASE("condition-1 certificate on a symmetric box") {
  ObjectiveSpec obj = quad({1, 1}, {0, 0});
  ConstraintSpec c = box(2, 2, {0, 0}, {2, 2});
  CHECK(verify_condition1(obj, c, {1, 1}, VariableDomain::Continuous).optimal);

  auto cert = verify_condition1(obj, c, {2, 0}, VariableDomain::Continuous);
  CHECK(!cert.optimal);
  REQUIRE(cert.witness.has_value());
  CHECK(cert.witness->first == 0);
  CHECK(cert.witness->second == 1);
}

TEST_CASE("quadratic symmetric optimum passes under exp") {
  ObjectiveSpec obj = quad({1, 1}, {0, 0});
  obj.f = catalog::exponential();
  ConstraintSpec c = box(2, 2, {0, 0}, {2, 2});
  CHECK(verify_condition1(obj, c, {1, 1}, VariableDomain::Continuous).optimal);
}

TEST_CASE("integer certificate uses unit-step quotients") {
  ObjectiveSpec obj = quad({1, 1}, {0, 0});
  ConstraintSpec c = box(2, 3, {0, 0}, {3, 3});
  // Both (2,1) and (1,2) are optimal; unit quotients tie at the threshold.
  CHECK(verify_condition1(obj, c, {2, 1}, VariableDomain::Integer).optimal);
  CHECK(verify_condition1(obj, c, {1, 2}, VariableDomain::Integer).optimal);
  CHECK(!verify_condition1(obj, c, {3, 0}, VariableDomain::Integer).optimal);
}

TEST_CASE("derivative identity matches the transform chain rule") {
  for (auto f : {catalog::exponential(), catalog::neg_log(), catalog::reciprocal(),
                 catalog::power4()}) {
    ObjectiveSpec obj = quad({2.5}, {1.25});
    obj.f = f;
    for (double x : {0.5, 1.0, 3.75}) {
      double y = x / 2.5 + 1.25;
      if (!f.domain.contains(y)) continue;
      CHECK(phi_left(obj, 0, x) == f.left_deriv(y));
      CHECK(phi_right(obj, 0, x) == f.right_deriv(y));
      // finite differences agree to 1e-6 relative on smooth entries
      double h = 1e-7;
      double fd = (f.eval(y + h) - f.eval(y - h)) / (2 * h);
      CHECK(phi_left(obj, 0, x) ==
            doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("finite-difference handles are flagged non-certifying") {
  auto fd = catalog::finite_difference(
      "square", [](double y) { return y * y; }, FunctionDomain::all());
  CHECK(!fd.derivatives_exact);
  CHECK(fd.left_deriv(2.0) == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("exchange symmetry at interior points") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    GenSpec gs;
    gs.kind = ConstraintKind::Box;
    gs.n = 6;
    gs.seed = seed;
    Instance inst = random_instance(gs);
    auto x = random_feasible_point(inst.cons, inst.dom, seed + 99);
    auto g = exchangeable_pairs(inst.cons, x, inst.dom);
    for (int i = 0; i < 6; ++i)
      for (int k = i + 1; k < 6; ++k) {
        bool i_int = x[i] > inst.cons.lower[i] + 1e-6 && x[i] < inst.cons.upper[i] - 1e-6;
        bool k_int = x[k] > inst.cons.lower[k] + 1e-6 && x[k] < inst.cons.upper[k] - 1e-6;
        if (i_int && k_int) {
          CHECK(g.contains(i, k));
          CHECK(g.contains(k, i));
        }
      }
  }
}

TEST_CASE("aggregated certificate agrees with the pairwise definition") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    GenSpec gs;
    gs.kind = static_cast<ConstraintKind>(seed % 4);
    gs.dom = seed % 2 ? VariableDomain::Integer : VariableDomain::Continuous;
    gs.n = 5 + static_cast<int>(seed % 4);
    gs.seed = 7000 + seed;
    Instance inst = random_instance(gs);
    auto x = random_feasible_point(inst.cons, inst.dom, seed);
    Certificate fast = verify_condition1(inst.obj, inst.cons, x, inst.dom);

    // Naive check over the explicit exchange graph.
    bool naive = true;
    auto g = exchangeable_pairs(inst.cons, x, inst.dom);
    for (const auto& p : g.pairs) {
      double give, recv;
      if (inst.dom == VariableDomain::Integer) {
        give = phi_step_down(inst.obj, p.from, x[p.from]);
        recv = phi_step_up(inst.obj, p.to, x[p.to]);
      } else {
        give = phi_left(inst.obj, p.from, x[p.from]) - kCertTol;
        recv = phi_right(inst.obj, p.to, x[p.to]) + kCertTol;
      }
      if (recv < give - kCertTol * std::max({1.0, std::abs(give), std::abs(recv)}))
        naive = false;
    }
    CHECK(fast.optimal == naive);
  }
}

TEST_CASE("tight sets are reported against the instance bounds") {
  ConstraintSpec c = box(3, 2, {0, 0, 0}, {3, 3, 3});
  c.kind = ConstraintKind::Nested;
  c.sets = {{0}};
  c.set_lower = {1};
  c.set_upper = {1};
  auto t = tight_sets(c, {1, 0.5, 0.5});
  REQUIRE(t.size() == 1);
  CHECK(t[0] == 0);
}
