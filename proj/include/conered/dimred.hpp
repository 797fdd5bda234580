#pragma once

#include "conered/core.hpp"

namespace conered {

struct TruncatedSvd {
  Matrix left;   ///< d x r, orthonormal columns (U_r)
  Vector sigma;  ///< r singular values, non-increasing
  Matrix right;  ///< n x r, orthonormal columns (V_r)
};

/// Top-r singular triplets of A. Each pair (u_k, v_k) is oriented so that the
/// largest-magnitude entry of u_k is positive (first such entry on ties).
/// Throws rank_too_large unless 1 <= r <= min(d, n).
TruncatedSvd truncated_svd(const Matrix& A, Index r);

/// A' = Sigma_r V_r^T (r x n). Column inner products of A' equal those of the
/// rank-r approximation U_r Sigma_r V_r^T.
Matrix reduce_dimension(const Matrix& A, Index r);

}  // namespace conered
