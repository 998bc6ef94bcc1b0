#pragma once

#include "rapkit/laminar_tree.hpp"

namespace rapkit {

// Preorder variable slots per node, for O(1) subtree membership queries.
struct TreeIndex {
  std::vector<int> node_in, node_out;  // [in, out) over variable slots
  std::vector<int> var_slot;

  bool var_in_subtree(int var, int node) const {
    int s = var_slot[var];
    return s >= node_in[node] && s < node_out[node];
  }
};

TreeIndex make_tree_index(const LaminarTree& tree);

// Whether one step of mass can move from `from` to `to` at x: donor and
// receiver box slack, and slack on every set bound separating the two.
// eps_max (optional) receives the smallest governing slack.
bool pair_exchangeable(const LaminarTree& tree, const TreeIndex& idx,
                       const std::vector<double>& sums, const std::vector<double>& x,
                       int from, int to, VariableDomain dom, double strict_tol,
                       double* eps_max = nullptr);

}  // namespace rapkit
