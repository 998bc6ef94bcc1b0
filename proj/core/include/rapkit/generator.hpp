#pragma once

#include <cstdint>

#include "rapkit/model.hpp"

namespace rapkit {

// Seeded random instances, feasible by construction: bounds are sorted
// uniform draws, set bounds are slack envelopes around a random feasible
// point's sums. a ~ U(0.1, 10), b ~ U(-5, 5).
struct GenSpec {
  ConstraintKind kind = ConstraintKind::Box;
  int n = 10;
  int m = -1;  // number of sets; -1 picks a kind-appropriate default
  VariableDomain dom = VariableDomain::Continuous;
  uint64_t seed = 0;
  int int_span = 8;          // max u - l per variable, integer instances
  double tight_prob = 0.1;   // chance a set bound pins its feasible-point sum
  double one_sided_prob = 0.2;
};

Instance random_instance(const GenSpec& spec);

// Random feasible point of an existing instance (propagation-based fill).
std::vector<double> random_feasible_point(const ConstraintSpec& cons, VariableDomain dom,
                                          uint64_t seed);

// Compact chain instance for large-n nested benchmarks; prefix slack grows
// with the dispersion of the prefix sums so only a handful of constraints
// bind at the optimum.
struct ChainInstance {
  std::vector<double> a, b, l, u;
  NestedChain chain;
  double R = 0.0;
};

ChainInstance random_chain_instance(int n, int m, uint64_t seed);

}  // namespace rapkit
