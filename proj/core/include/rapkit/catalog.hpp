#pragma once

#include <vector>

#include "rapkit/types.hpp"

namespace rapkit::catalog {

ConvexFunction quadratic();    // y^2 / 2
ConvexFunction exponential();  // e^y
ConvexFunction neg_log();      // -log y on (0, inf)
ConvexFunction reciprocal();   // 1/y on (0, inf)
ConvexFunction absolute();     // |y|, kink at 0
ConvexFunction power4();       // y^4

// 0 for y <= level, (y - level)^2 above it.
ConvexFunction threshold(double level);

// y^-p on (0, inf); the shape of distance/work cost rates q(y) = y c(1/y)
// and energy rates q(y) = y p(1/y) for power-law c, p.
ConvexFunction neg_power(double p);

// Wraps a plain evaluator with central finite-difference derivatives
// (h = 1e-7, one-sided at declared kinks). Flagged non-certifying.
ConvexFunction finite_difference(std::string name,
                                 std::function<double(double)> eval,
                                 FunctionDomain domain,
                                 std::vector<double> kinks = {},
                                 bool strictly_convex = false);

// Lookup by the names used in instance files: quadratic, exp, neg_log,
// reciprocal, abs, power4, threshold (takes parameter M).
// Returns false if the name is unknown.
bool lookup(const std::string& name, double threshold_level, ConvexFunction* out);

}  // namespace rapkit::catalog
