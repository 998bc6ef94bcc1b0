#pragma once

#include <cstdint>
#include <random>

#include "rapkit/types.hpp"

namespace rapkit {

// Forest view of a laminar family: an implicit root carrying the resource
// equality, one node per family set, and box bounds attached to the variables
// as leaf intervals. Nodes are stored parents-first, so a single forward or
// reverse sweep of `nodes` is a top-down or bottom-up traversal.
struct LaminarTree {
  struct Node {
    int parent = -1;
    std::vector<int> children;
    std::vector<int> direct_vars;  // variables whose deepest set is this node
    double lo = -kInf, hi = kInf;  // set bounds; [R, R] at the root
    int orig_set = -1;             // index into ConstraintSpec::sets, -1 for root
    int subtree_size = 0;
    int depth = 0;
  };

  int n = 0;
  double R = 0.0;
  std::vector<Node> nodes;              // nodes[0] is the root
  std::vector<double> var_lower, var_upper;
  std::vector<int> owner;               // variable -> deepest node containing it

  // Sum of x over each node's subtree.
  std::vector<double> subtree_sums(const std::vector<double>& x) const;
  // Variables of a node's subtree, ascending.
  std::vector<int> subtree_vars(int node) const;
};

// Builds the forest; validates that the sets are pairwise nested or disjoint
// (MALFORMED_FAMILY otherwise). Sets equal to the whole index set fold into
// the root interval.
LaminarTree build_tree(const ConstraintSpec& cons);

// Chain of prefix sets over a fixed variable order; the compact form used by
// the nested-constraint fast path so a chain of m prefixes costs O(n + m)
// rather than O(n m) to store.
struct NestedChain {
  std::vector<int> order;       // permutation of 0..n-1
  std::vector<int> prefix_len;  // strictly increasing, each in (0, n)
  std::vector<double> L, U;

  int m() const { return static_cast<int>(prefix_len.size()); }
};

LaminarTree build_tree(const NestedChain& chain, const std::vector<double>& l,
                       const std::vector<double>& u, double R);

// Converts an explicit nested family to the compact chain form. The variable
// order lists the innermost set first, each ring of the next set after it.
NestedChain to_nested_chain(const ConstraintSpec& cons);

// One bottom-up and one top-down interval pass. Node intervals shrink against
// children sums and parent residuals; leaf intervals likewise. For integer
// domains every interval is rounded inward. Throws INFEASIBLE naming the node
// whose interval became empty.
LaminarTree propagate_bounds(const LaminarTree& tree,
                             VariableDomain dom = VariableDomain::Continuous);

// A feasible point of the tightened tree: every node total is distributed to
// its children starting from their interval floors. With a generator, the
// split is randomized; otherwise it is the deterministic index-order fill.
std::vector<double> feasible_fill(const LaminarTree& tightened, VariableDomain dom,
                                  std::mt19937_64* rng = nullptr);

// z - x written as nonnegative weights on exchange directions e_k - e_i,
// produced by walking the family deepest set first and closing coordinate
// gaps pairwise (smallest index pair first).
struct ConicDecomposition {
  int n = 0;
  std::vector<double> lambda;  // n*n row-major
  struct Step {
    int t = 0;
    int from = 0, to = 0;
    double amount = 0.0;
  };
  std::vector<Step> trace;

  double weight(int from, int to) const { return lambda[static_cast<size_t>(from) * n + to]; }
};

ConicDecomposition conic_decompose(const LaminarTree& tree, const std::vector<double>& x,
                                   const std::vector<double>& z);

// Replays a decomposition and checks the structural guarantees: conserved
// totals, monotone per-coordinate convergence, each pair selected at most
// once, subset sums untouched before their block, exact reconstruction, and
// membership of every positive-weight pair in the exchange graph at x.
struct LemmaReport {
  bool all_passed = true;
  bool conserved_totals = true;       // every intermediate point sums to R
  bool monotone_coordinates = true;   // no overshoot past z
  bool pairs_unique = true;           // each ordered pair at most once
  bool subset_sums_invariant = true;  // set sums fixed until their block
  bool reconstructs = true;           // sum of weighted directions equals z - x
  bool pairs_exchangeable = true;     // positive weights are exchangeable pairs
  bool partition_consistent = true;   // givers / receivers / fixed are disjoint
  std::vector<std::string> failures;
};

LemmaReport check_lemma_properties(const LaminarTree& tree, const std::vector<double>& x,
                                   const std::vector<double>& z,
                                   const ConicDecomposition& dec,
                                   VariableDomain dom = VariableDomain::Continuous);

// The family {N_j} united with its complements, with bounds rewritten as
// upper bounds r(N_j) = U_j, r(N \ N_j) = R - L_j, plus the four-intersection
// cross-freeness verdict.
struct CrossFreeFamily {
  int n = 0;
  double R = 0.0;
  std::vector<std::vector<int>> sets;
  std::vector<double> r;
  bool crossfree = false;
};

CrossFreeFamily laminar_to_crossfree(const ConstraintSpec& cons);

bool is_cross_free(const std::vector<std::vector<int>>& sets, int n);

// Membership test against the rewritten family: all upper bounds plus the
// total equality, at the given tolerance.
bool crossfree_feasible(const CrossFreeFamily& fam, const std::vector<double>& x,
                        double tol = kFeasTol);

}  // namespace rapkit
