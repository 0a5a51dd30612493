#pragma once

#include "segfib/scalar.hpp"

#include <vector>

namespace segfib {

// Outcome of the feasibility problem A x = b, x >= 0.
struct LpResult {
  bool feasible = false;
  RatVector solution;  // when feasible
  // When infeasible: y with y^T A <= 0 and y^T b > 0.
  RatVector farkas;
};

// Exact phase-one simplex with integer (fraction-free) pivoting. Falls back
// to Bland's rule on degenerate stalls, so it always terminates.
LpResult solve_feasibility(const IntMatrix& a, const IntVector& b);

// Rows of a rational matrix scaled to integers (each by its own positive
// denominator lcm).
IntMatrix scale_rows(const RatMatrix& m);

}  // namespace segfib
