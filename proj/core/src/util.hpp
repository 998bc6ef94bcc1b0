#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rapkit/types.hpp"

namespace rapkit::detail {

inline double clampv(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

// Compensated summation; keeps million-term residuals inside kFeasTol.
inline double stable_sum(const double* v, size_t n) {
  double s = 0.0, c = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double y = v[i] - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

inline double stable_sum(const std::vector<double>& v) {
  return stable_sum(v.data(), v.size());
}

// Sum that may contain infinities of one sign.
struct BoundSum {
  double finite = 0.0;
  int pos_inf = 0;
  int neg_inf = 0;

  void add(double v) {
    if (v == kInf) ++pos_inf;
    else if (v == -kInf) ++neg_inf;
    else finite += v;
  }
  double value() const {
    if (pos_inf && neg_inf) return std::numeric_limits<double>::quiet_NaN();
    if (pos_inf) return kInf;
    if (neg_inf) return -kInf;
    return finite;
  }
  // Value of the sum with one term removed.
  double value_without(double v) const {
    BoundSum s = *this;
    if (v == kInf) --s.pos_inf;
    else if (v == -kInf) --s.neg_inf;
    else s.finite -= v;
    return s.value();
  }
};

inline bool is_integral(double v, double tol = 1e-9) {
  return std::isfinite(v) && std::abs(v - std::round(v)) <= tol;
}

inline double round_up_int(double v, double tol = 1e-9) {
  return std::isfinite(v) ? std::ceil(v - tol) : v;
}

inline double round_down_int(double v, double tol = 1e-9) {
  return std::isfinite(v) ? std::floor(v + tol) : v;
}

}  // namespace rapkit::detail
