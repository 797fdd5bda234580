#include "conered/dimred.hpp"

#include <algorithm>
#include <string>

namespace conered {

TruncatedSvd truncated_svd(const Matrix& A, Index r) {
  const Index full = std::min(A.rows(), A.cols());
  if (r < 1 || r > full) {
    throw Error(ErrorCode::rank_too_large, "truncated_svd: rank " + std::to_string(r) +
                                               " outside [1, " + std::to_string(full) + "]");
  }
  // Householder bidiagonalization followed by a bidiagonal SVD; singular
  // values come back sorted in decreasing order.
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);

  TruncatedSvd out;
  out.left = svd.matrixU().leftCols(r);
  out.sigma = svd.singularValues().head(r);
  out.right = svd.matrixV().leftCols(r);

  for (Index k = 0; k < r; ++k) {
    Index pivot = 0;
    double best = -1.0;
    for (Index i = 0; i < out.left.rows(); ++i) {
      const double mag = std::abs(out.left(i, k));
      if (mag > best) {
        best = mag;
        pivot = i;
      }
    }
    if (out.left(pivot, k) < 0.0) {
      out.left.col(k) *= -1.0;
      out.right.col(k) *= -1.0;
    }
  }
  return out;
}

Matrix reduce_dimension(const Matrix& A, Index r) {
  const TruncatedSvd svd = truncated_svd(A, r);
  return svd.sigma.asDiagonal() * svd.right.transpose();
}

}  // namespace conered
