#pragma once

#include "conered/core.hpp"

namespace conered {

struct NnlsResult {
  Vector x;                    ///< x >= 0
  double residual_norm = 0.0;  ///< ||B x - y||_2
  int iterations = 0;          ///< outer active-set iterations
};

/// min ||B x - y||_2 subject to x >= 0, by the Lawson-Hanson active-set method.
///
/// The entering variable is the one with the most negative gradient
/// (largest component of B^T (y - B x)), lowest index on ties. Passive-set
/// least-squares subproblems use a complete orthogonal decomposition (QR with
/// column pivoting), which yields the minimum-norm solution when the passive
/// columns are rank deficient. Terminates when every free gradient
/// component is >= -tol_nnls.
///
/// Throws max_iterations when more than `max_iterations` outer iterations are
/// needed; 0 selects the default cap of 10 * B.cols().
NnlsResult nnls_solve(const Matrix& B, const Vector& y, double tol_nnls = 1e-10, int max_iterations = 0);

struct MembershipResult {
  bool inside = false;
  NnlsResult nnls;
};

/// a is treated as a member of cone(Asub) iff the NNLS residual is strictly
/// below eps_feas. An Asub with zero columns represents cone = {0}.
MembershipResult cone_membership(const Matrix& Asub, const Vector& a, double eps_feas, double tol_nnls = 1e-10);

}  // namespace conered
