#pragma once

#include "rapkit/types.hpp"

namespace rapkit {

// Candidate multipliers b_i + l_i/a_i and b_i + u_i/a_i, ascending with a
// stable (value, variable, bound-side) tie order. Infinite bounds contribute
// no entry, so size <= 2n.
struct Breakpoint {
  double value;
  int var;
  bool upper;
};

struct BreakpointSet {
  std::vector<Breakpoint> values;
};

BreakpointSet make_breakpoints(const std::vector<double>& a, const std::vector<double>& b,
                               const std::vector<double>& l, const std::vector<double>& u);

// min sum x_i^2/(2 a_i) + b_i x_i  s.t.  sum x = R, l <= x <= u.
// Breakpoint search: locate the segment where the monotone map
// lambda -> sum clamp(a_i (lambda - b_i), l_i, u_i) crosses R and solve the
// linear equation there. O(n log n).
Solution solve_qbox_continuous(const std::vector<double>& a, const std::vector<double>& b,
                               const std::vector<double>& l, const std::vector<double>& u,
                               double R);

// Same optimum via variable fixing: solve the bound-free problem on the
// active set, permanently fix the bound violators on the side with the larger
// aggregate violation, repeat. O(n^2) worst case.
Solution solve_qbox_variable_fixing(const std::vector<double>& a, const std::vector<double>& b,
                                    const std::vector<double>& l, const std::vector<double>& u,
                                    double R);

// Integer optimum via a threshold on unit marginal costs
// delta_i(v) = (v + 1/2)/a_i + b_i: bracket the threshold, take every cheaper
// unit, and hand out the residual units at the threshold lowest index first.
Solution solve_qbox_integer(const std::vector<double>& a, const std::vector<double>& b,
                            const std::vector<double>& l, const std::vector<double>& u,
                            double R);

// The multiplier the continuous solver would report for target total T;
// exposed for the two-level searches built on top of this solver.
double qbox_multiplier(const std::vector<double>& a, const std::vector<double>& b,
                       const std::vector<double>& l, const std::vector<double>& u, double T);

}  // namespace rapkit
