#pragma once

#include "vass/integer.hpp"

namespace vass {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;  // optimum, when Optimal
  RatVector x;     // an optimal vertex, when Optimal
};

// Exact two-phase simplex: maximize c.x subject to A x = b, x >= 0.  Fraction
// free integer pivoting with Bland's rule, so it always terminates.
[[nodiscard]] LpResult lp_maximize(const IntMatrix& a, const IntVector& b, const IntVector& c);

}  // namespace vass
