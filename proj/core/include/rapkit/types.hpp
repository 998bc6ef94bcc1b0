#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rapkit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Absolute tolerance on constraint residuals.
inline constexpr double kFeasTol = 1e-9;
// Tolerance on optimality-certificate comparisons (applied with a relative
// guard, see verify_condition1).
inline constexpr double kCertTol = 1e-8;

enum class ErrorCode {
  DimensionMismatch,
  NonpositiveScale,
  MalformedFamily,
  DomainViolation,
  Infeasible,
  InfeasiblePoint,
  CertificateFailure,
  BudgetExceeded,
  GreedyUnsafe,
  NotStrictlyConvex,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

// Interval on which a convex function is finite; either end may be open.
struct FunctionDomain {
  double lo = -kInf;
  double hi = kInf;
  bool lo_open = false;
  bool hi_open = false;

  bool contains(double y) const {
    if (lo_open ? !(y > lo) : !(y >= lo)) return false;
    if (hi_open ? !(y < hi) : !(y <= hi)) return false;
    return true;
  }
  static FunctionDomain all() { return {}; }
  static FunctionDomain positive() { return {0.0, kInf, true, false}; }
};

// Single-variable convex function with explicit one-sided derivatives.
// Handles built from finite differences carry derivatives_exact = false and
// are not accepted as certifying derivatives at kinks.
struct ConvexFunction {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> left_deriv;   // f-
  std::function<double(double)> right_deriv;  // f+
  FunctionDomain domain;
  bool strictly_convex = false;
  bool derivatives_exact = true;
  std::optional<double> param;  // e.g. the threshold level
};

enum class VariableDomain { Continuous, Integer };
enum class ConstraintKind { Box, Gbc, Nested, Laminar };

const char* to_string(ConstraintKind kind);
const char* to_string(VariableDomain dom);

// Objective sum_i a_i f(x_i / a_i + b_i). f absent means the quadratic
// f(y) = y^2 / 2, for which the evaluated value drops the constant terms:
// sum_i x_i^2 / (2 a_i) + b_i x_i.
struct ObjectiveSpec {
  std::vector<double> a;
  std::vector<double> b;
  std::optional<ConvexFunction> f;

  bool quadratic() const { return !f.has_value(); }
  int n() const { return static_cast<int>(a.size()); }
};

// Resource total plus one structured family of set bounds. Member indices are
// 0-based internally; instance files use 1-based indices.
struct ConstraintSpec {
  int n = 0;
  double R = 0.0;
  ConstraintKind kind = ConstraintKind::Box;
  std::vector<double> lower, upper;           // per-variable box, +-inf allowed
  std::vector<std::vector<int>> sets;         // empty for Box
  std::vector<double> set_lower, set_upper;

  int num_sets() const { return static_cast<int>(sets.size()); }
};

struct Solution {
  std::vector<double> x;
  std::optional<double> lambda;
  std::vector<int> tight_sets;   // family sets met with equality
  bool certified = false;
  double objective_value = 0.0;
  std::string solver;
};

// Ordered pairs (from, to) along which mass can be shifted while staying
// feasible, with the largest feasible shift per pair.
struct ExchangeGraph {
  struct Pair {
    int from = 0;
    int to = 0;
    double eps_max = 0.0;
  };
  std::vector<Pair> pairs;

  bool contains(int from, int to) const {
    for (const auto& p : pairs)
      if (p.from == from && p.to == to) return true;
    return false;
  }
};

}  // namespace rapkit
