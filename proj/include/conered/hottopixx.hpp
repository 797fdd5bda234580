#pragma once

#include <ostream>

#include "conered/core.hpp"
#include "conered/lp.hpp"

namespace conered {

/// Self-dictionary LP on the m columns of A (q x m):
///
///   minimize    sum_{k,j} T(k,j)
///   subject to  -T <= A - A X <= T
///               sum_i X(i,i) = r
///               0 <= X(i,j) <= X(i,i) <= 1      for all i, j
///
/// with X (m x m) and T (q x m). Variables are numbered X column-major
/// first, then T column-major.
class ModelH {
 public:
  /// Throws bad_rank unless 1 <= r <= m.
  ModelH(Matrix A, Index r);

  const Matrix& data() const noexcept { return A_; }
  Index rank() const noexcept { return r_; }
  Index columns() const noexcept { return A_.cols(); }
  Index rows() const noexcept { return A_.rows(); }

  /// m^2 + q*m
  Index variable_count() const noexcept;
  /// 2*q*m residual bounds, 1 trace row, 2*m^2 for 0 <= X(i,j) <= X(i,i)
  /// (diagonal included), m upper bounds X(i,i) <= 1.
  Index constraint_count() const noexcept;

  Index x_var(Index i, Index j) const noexcept { return j * columns() + i; }
  Index t_var(Index k, Index j) const noexcept { return columns() * columns() + j * rows() + k; }

  /// Explicit dense encoding (x >= 0 implicit): A_ub holds the 2qm residual
  /// rows, the m^2 rows X(i,j) - X(i,i) <= 0 and the m rows X(i,i) <= 1;
  /// A_eq is the trace row.
  DenseLp to_dense_lp() const;

  /// CPLEX-style LP text for cross-checking with external solvers.
  void write_lp(std::ostream& out) const;

 private:
  Matrix A_;
  Index r_;
};

struct LpSolution {
  Matrix X;
  double objective = 0.0;  ///< sum of |A - A X| evaluated at the returned X
  LpStatus status = LpStatus::infeasible;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
};

struct IpmOptions {
  int max_iterations = 200;
  /// Relative primal/dual residual and gap targeted before stopping.
  double target = 1e-9;
  /// Stop after this many iterations without halving the best error.
  int stall_iterations = 6;
};

/// Mehrotra predictor-corrector interior-point method specialised to the
/// structure of model H. The Newton system is reduced to an m x m Schur
/// complement on the diagonal of X by a block Cholesky factorization (one
/// dense m x m factor per column of X). Status is optimal when the final
/// residuals and gap are within tol_lp and X passes the constraint audit.
LpSolution solve_model_h(const ModelH& model, double tol_lp = 1e-7, const IpmOptions& options = {});

/// Same model through the dense two-phase simplex. Only for small m (tableau
/// memory grows like m^4); throws too_many_columns above max_columns.
LpSolution solve_model_h_simplex(const ModelH& model, Index max_columns = 20);

/// sum_{k,j} |A - A X|(k,j)
double model_h_objective(const Matrix& A, const Matrix& X);

struct ConstraintAudit {
  double max_violation = 0.0;
  bool feasible = false;
};

/// Checks every model-H constraint on X directly.
ConstraintAudit audit_model_h(const Matrix& X, Index r, double tol);

/// Centroid-based selection of r columns from an LP solution X of model H on A:
///  1. seeds = the r largest diagonal entries of X (lowest index on ties);
///  2. every seed forms its own cluster; each other column j with a nonzero
///     diagonal X(j,j) joins the seed i with the largest X(i,j) (lowest seed
///     index on ties); columns with a zero diagonal belong to no cluster;
///  3. each cluster contributes the member closest (L2) to the centroid of
///     its columns of A (lowest index on ties).
/// Values are compared after rounding to 1e-9 so the outcome does not hinge
/// on solver noise. Throws degenerate_diagonal if fewer than r diagonal
/// entries are nonzero.
IndexSet postprocess_method_c(const Matrix& A, const Matrix& X, Index r);

}  // namespace conered
