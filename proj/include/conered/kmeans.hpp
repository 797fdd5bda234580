#pragma once

#include <cstdint>
#include <vector>

#include "conered/core.hpp"

namespace conered {

/// p pairwise-disjoint, non-empty groups covering the column indices [0, n).
struct Partition {
  std::vector<IndexSet> groups;
  /// The p that was asked for. groups.size() is smaller only when the input
  /// has fewer distinct columns than requested.
  Index requested_groups = 0;

  Index size() const noexcept { return static_cast<Index>(groups.size()); }
};

struct KmeansOptions {
  int max_iterations = 100;
};

struct KmeansResult {
  Partition partition;
  /// Within-cluster sum of squares after each Lloyd iteration.
  std::vector<double> objective_history;
  int iterations = 0;
  bool converged = false;
};

/// Lloyd's algorithm on the columns of A with squared Euclidean distance and
/// k-means++ seeding. Clusters that go empty receive the point farthest from
/// its centroid (taken from a cluster with at least two members).
KmeansResult kmeans(const Matrix& A, Index p, std::uint64_t seed, const KmeansOptions& options = {});

Partition kmeans_partition(const Matrix& A, Index p, std::uint64_t seed);

/// Number of distinct columns (exact equality).
Index count_distinct_columns(const Matrix& A);

}  // namespace conered
