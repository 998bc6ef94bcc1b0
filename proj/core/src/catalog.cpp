#include "rapkit/catalog.hpp"

#include <algorithm>
#include <cmath>

namespace rapkit::catalog {

ConvexFunction quadratic() {
  ConvexFunction f;
  f.name = "quadratic";
  f.eval = [](double y) { return 0.5 * y * y; };
  f.left_deriv = [](double y) { return y; };
  f.right_deriv = [](double y) { return y; };
  f.domain = FunctionDomain::all();
  f.strictly_convex = true;
  return f;
}

ConvexFunction exponential() {
  ConvexFunction f;
  f.name = "exp";
  f.eval = [](double y) { return std::exp(y); };
  f.left_deriv = [](double y) { return std::exp(y); };
  f.right_deriv = [](double y) { return std::exp(y); };
  f.domain = FunctionDomain::all();
  f.strictly_convex = true;
  return f;
}

ConvexFunction neg_log() {
  ConvexFunction f;
  f.name = "neg_log";
  f.eval = [](double y) { return -std::log(y); };
  f.left_deriv = [](double y) { return -1.0 / y; };
  f.right_deriv = [](double y) { return -1.0 / y; };
  f.domain = FunctionDomain::positive();
  f.strictly_convex = true;
  return f;
}

ConvexFunction reciprocal() {
  ConvexFunction f;
  f.name = "reciprocal";
  f.eval = [](double y) { return 1.0 / y; };
  f.left_deriv = [](double y) { return -1.0 / (y * y); };
  f.right_deriv = [](double y) { return -1.0 / (y * y); };
  f.domain = FunctionDomain::positive();
  f.strictly_convex = true;
  return f;
}

ConvexFunction absolute() {
  ConvexFunction f;
  f.name = "abs";
  f.eval = [](double y) { return std::abs(y); };
  f.left_deriv = [](double y) { return y <= 0.0 ? -1.0 : 1.0; };
  f.right_deriv = [](double y) { return y < 0.0 ? -1.0 : 1.0; };
  f.domain = FunctionDomain::all();
  f.strictly_convex = false;
  return f;
}

ConvexFunction power4() {
  ConvexFunction f;
  f.name = "power4";
  f.eval = [](double y) { return y * y * y * y; };
  f.left_deriv = [](double y) { return 4.0 * y * y * y; };
  f.right_deriv = [](double y) { return 4.0 * y * y * y; };
  f.domain = FunctionDomain::all();
  f.strictly_convex = true;
  return f;
}

ConvexFunction threshold(double level) {
  ConvexFunction f;
  f.name = "threshold";
  f.eval = [level](double y) {
    double t = y - level;
    return t <= 0.0 ? 0.0 : t * t;
  };
  f.left_deriv = [level](double y) {
    double t = y - level;
    return t <= 0.0 ? 0.0 : 2.0 * t;
  };
  f.right_deriv = [level](double y) {
    double t = y - level;
    return t < 0.0 ? 0.0 : 2.0 * std::max(t, 0.0);
  };
  f.domain = FunctionDomain::all();
  f.strictly_convex = false;
  f.param = level;
  return f;
}

ConvexFunction neg_power(double p) {
  ConvexFunction f;
  f.name = "neg_power";
  f.eval = [p](double y) { return std::pow(y, -p); };
  f.left_deriv = [p](double y) { return -p * std::pow(y, -p - 1.0); };
  f.right_deriv = [p](double y) { return -p * std::pow(y, -p - 1.0); };
  f.domain = FunctionDomain::positive();
  f.strictly_convex = true;
  return f;
}

ConvexFunction finite_difference(std::string name, std::function<double(double)> eval,
                                 FunctionDomain domain, std::vector<double> kinks,
                                 bool strictly_convex) {
  constexpr double h = 1e-7;
  auto is_kink = [kinks](double y) {
    for (double k : kinks)
      if (std::abs(y - k) <= h) return true;
    return false;
  };
  ConvexFunction f;
  f.name = std::move(name);
  f.domain = domain;
  f.strictly_convex = strictly_convex;
  f.derivatives_exact = false;
  f.left_deriv = [eval, is_kink](double y) {
    if (is_kink(y)) return (eval(y) - eval(y - h)) / h;
    return (eval(y + h) - eval(y - h)) / (2.0 * h);
  };
  f.right_deriv = [eval, is_kink](double y) {
    if (is_kink(y)) return (eval(y + h) - eval(y)) / h;
    return (eval(y + h) - eval(y - h)) / (2.0 * h);
  };
  f.eval = std::move(eval);
  return f;
}

bool lookup(const std::string& name, double threshold_level, ConvexFunction* out) {
  if (name == "quadratic") *out = quadratic();
  else if (name == "exp") *out = exponential();
  else if (name == "neg_log") *out = neg_log();
  else if (name == "reciprocal") *out = reciprocal();
  else if (name == "abs") *out = absolute();
  else if (name == "power4") *out = power4();
  else if (name == "threshold") *out = threshold(threshold_level);
  else return false;
  return true;
}

}  // namespace rapkit::catalog
