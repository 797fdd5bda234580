#include "conered/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "conered/rng.hpp"

namespace conered {
namespace {

bool column_less(const Matrix& A, Index a, Index b) {
  for (Index i = 0; i < A.rows(); ++i) {
    if (A(i, a) != A(i, b)) return A(i, a) < A(i, b);
  }
  return false;
}

// k-means++: first center uniform, then proportional to squared distance to
// the nearest chosen center.
Matrix seed_centers(const Matrix& A, Index p, Rng& rng) {
  const Index n = A.cols();
  Matrix centers(A.rows(), p);
  Vector nearest = Vector::Constant(n, std::numeric_limits<double>::infinity());

  Index pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
  for (Index c = 0; c < p; ++c) {
    centers.col(c) = A.col(pick);
    for (Index j = 0; j < n; ++j) nearest(j) = std::min(nearest(j), (A.col(j) - centers.col(c)).squaredNorm());
    if (c + 1 == p) break;
    const double total = nearest.sum();
    double target = rng.uniform() * total;
    pick = -1;
    for (Index j = 0; j < n; ++j) {
      if (nearest(j) <= 0.0) continue;
      pick = j;
      target -= nearest(j);
      if (target < 0.0) break;
    }
    if (pick < 0) break;  // unreachable while p <= distinct columns
  }
  return centers;
}

}  // namespace

Index count_distinct_columns(const Matrix& A) {
  std::vector<Index> order(static_cast<std::size_t>(A.cols()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return column_less(A, a, b); });
  Index distinct = order.empty() ? 0 : 1;
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (column_less(A, order[k - 1], order[k])) ++distinct;
  }
  return distinct;
}

KmeansResult kmeans(const Matrix& A, Index p, std::uint64_t seed, const KmeansOptions& options) {
  const Index n = A.cols();
  if (p < 1 || p > n) {
    throw Error(ErrorCode::invalid_argument,
                "kmeans: p = " + std::to_string(p) + " outside [1, " + std::to_string(n) + "]");
  }
  KmeansResult result;
  result.partition.requested_groups = p;
  p = std::min(p, count_distinct_columns(A));

  Rng rng(seed);
  Matrix centers = seed_centers(A, p, rng);
  std::vector<Index> label(static_cast<std::size_t>(n), -1);
  std::vector<Index> counts(static_cast<std::size_t>(p), 0);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    bool changed = false;
    for (Index j = 0; j < n; ++j) {
      Index best = 0;
      double best_dist = (A.col(j) - centers.col(0)).squaredNorm();
      for (Index c = 1; c < p; ++c) {
        const double dist = (A.col(j) - centers.col(c)).squaredNorm();
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
      if (label[static_cast<std::size_t>(j)] != best) {
        label[static_cast<std::size_t>(j)] = best;
        changed = true;
      }
    }

    std::fill(counts.begin(), counts.end(), 0);
    for (Index l : label) ++counts[static_cast<std::size_t>(l)];
    for (Index c = 0; c < p; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Index donor = -1;
      double far = -1.0;
      for (Index j = 0; j < n; ++j) {
        const Index l = label[static_cast<std::size_t>(j)];
        if (counts[static_cast<std::size_t>(l)] < 2) continue;
        const double dist = (A.col(j) - centers.col(l)).squaredNorm();
        if (dist > far) {
          far = dist;
          donor = j;
        }
      }
      --counts[static_cast<std::size_t>(label[static_cast<std::size_t>(donor)])];
      label[static_cast<std::size_t>(donor)] = c;
      counts[static_cast<std::size_t>(c)] = 1;
      changed = true;
    }

    centers.setZero();
    for (Index j = 0; j < n; ++j) centers.col(label[static_cast<std::size_t>(j)]) += A.col(j);
    for (Index c = 0; c < p; ++c) centers.col(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);

    double objective = 0.0;
    for (Index j = 0; j < n; ++j) objective += (A.col(j) - centers.col(label[static_cast<std::size_t>(j)])).squaredNorm();
    result.objective_history.push_back(objective);
    result.iterations = iter + 1;
    if (!changed) {
      result.converged = true;
      break;
    }
  }

  std::vector<std::vector<Index>> members(static_cast<std::size_t>(p));
  for (Index j = 0; j < n; ++j) members[static_cast<std::size_t>(label[static_cast<std::size_t>(j)])].push_back(j);
  for (auto& group : members) result.partition.groups.push_back(IndexSet::from_unsorted(std::move(group)));
  return result;
}

Partition kmeans_partition(const Matrix& A, Index p, std::uint64_t seed) {
  return kmeans(A, p, seed).partition;
}

}  // namespace conered
