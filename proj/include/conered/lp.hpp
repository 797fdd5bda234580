#pragma once

#include "conered/core.hpp"

namespace conered {

enum class LpStatus { optimal, iteration_limit, infeasible, unbounded };

const char* to_string(LpStatus status);

/// min c^T x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
/// Either constraint block may have zero rows.
struct DenseLp {
  Vector c;
  Matrix A_ub;
  Vector b_ub;
  Matrix A_eq;
  Vector b_eq;

  Index variables() const noexcept { return c.size(); }
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vector x;
  double objective = 0.0;
  int iterations = 0;
};

struct SimplexOptions {
  int max_iterations = 50000;
  double tolerance = 1e-10;
};

/// Two-phase tableau simplex. Dantzig pricing, switching to Bland's rule
/// after a run of degenerate pivots. The final basic solution is recomputed
/// from the original data to remove accumulated tableau error.
LpResult solve_dense_simplex(const DenseLp& lp, const SimplexOptions& options = {});

}  // namespace conered
