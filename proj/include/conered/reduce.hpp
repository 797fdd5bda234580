#pragma once

#include <cstdint>
#include <optional>

#include "conered/core.hpp"
#include "conered/kmeans.hpp"

namespace conered {

struct ReduceOptions {
  double eps_feas = 1e-8;
  double tol_nnls = 1e-10;
};

/// Single-pass conical-hull reduction. Columns are visited once in ascending
/// order; column i is dropped when it lies (within eps_feas) in the cone of
/// the columns still retained, excluding itself. The result K satisfies
/// cone(A(K)) = cone(A), and no element of K can be dropped.
///
/// Among exact duplicates the highest-index copy survives.
/// Throws zero_column if A has an all-zero column.
IndexSet dr(const Matrix& A, const ReduceOptions& options = {});

struct DrsResult {
  IndexSet kept;            ///< final K, indices into the columns of A
  Partition partition;      ///< the k-means groups I_1..I_p
  IndexSet intermediate;    ///< I = K_1 u ... u K_p before the final pass
};

/// Reduction with splitting: k-means partition of the columns into p groups,
/// dr on every group (independent, run on up to `threads` workers), then dr
/// on the union of the group survivors.
DrsResult drs(const Matrix& A, Index p, std::uint64_t seed, const ReduceOptions& options = {},
              unsigned threads = 1);

struct GammaReport {
  bool in_gamma = false;
  bool minimal = false;
  /// First index that breaks cone generation, or, if generation holds, the
  /// first element of K that is redundant.
  std::optional<Index> witness;
};

/// Checks that A(K) generates cone(A) and that no element of K is redundant.
GammaReport verify_gamma(const Matrix& A, const IndexSet& K, const ReduceOptions& options = {});

}  // namespace conered
