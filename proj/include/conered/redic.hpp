#pragma once

#include <cstdint>
#include <vector>

#include "conered/core.hpp"
#include "conered/hottopixx.hpp"

namespace conered {

struct RedicConfig {
  Index r = 1;
  Index lambda = 0;  ///< columns added to K in every repetition
  Index tau = 1;     ///< repetitions
  Index p = 30;      ///< k-means groups for the reduction step
  std::uint64_t seed = 0;
  ToleranceConfig tolerances;
  IpmOptions ipm;
};

struct RepetitionTrace {
  IndexSet augmented;        ///< K_add
  LpSolution lp;
};

struct EndmemberEstimate {
  Matrix W_hat;                      ///< d x r
  std::vector<Matrix> per_rep;       ///< aligned W_1 .. W_tau
  /// per_rep[j].col(c) == A.col(selected_indices[j][c])
  std::vector<std::vector<Index>> selected_indices;
  IndexSet reduced;                  ///< K from the reduction step
  std::vector<RepetitionTrace> trace;
};

/// Endmember extraction on A (d x n):
///  1. A' = Sigma_r V_r^T;
///  2. K = drs(A', p);
///  3. for j = 1..tau: K_add = lambda columns drawn uniformly without
///     replacement from the complement of K (stream j of the seed); solve
///     model H on A'(K u K_add); pick r columns with method C; W_j = the
///     corresponding columns of A;
///  4. for j = 2..tau align W_j against the mean of W_1..W_{j-1};
///  5. W_hat = mean of the aligned W_j.
/// Repetitions run on up to `threads` workers; the result does not depend
/// on the thread count. Throws insufficient_columns if lambda > n - |K|, and
/// numerical_breakdown if an LP does not reach optimality.
EndmemberEstimate redic(const HsiMatrix& A, const RedicConfig& cfg, unsigned threads = 1);

/// Permutation sigma minimizing sum_c MRSA(C.col(c), W_j.col(sigma[c])).
std::vector<Index> alignment_permutation(const Matrix& C, const Matrix& W_j);

/// W_j with columns reordered by alignment_permutation(C, W_j).
Matrix align_columns(const Matrix& C, const Matrix& W_j);

/// Draws K_add as in step 3 of redic(); exposed for testing.
IndexSet draw_augmentation(const IndexSet& K, Index n, Index lambda, std::uint64_t seed, std::uint64_t repetition);

}  // namespace conered
