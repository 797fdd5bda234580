#include "conered/reduce.hpp"

#include <string>
#include <vector>

#include "conered/nnls.hpp"
#include "conered/parallel.hpp"

namespace conered {
namespace {

Matrix gather_except(const Matrix& A, const std::vector<Index>& columns, Index skip) {
  Matrix out(A.rows(), static_cast<Index>(columns.size()) - 1);
  Index k = 0;
  for (Index j : columns) {
    if (j != skip) out.col(k++) = A.col(j);
  }
  return out;
}

}  // namespace

IndexSet dr(const Matrix& A, const ReduceOptions& options) {
  for (Index j = 0; j < A.cols(); ++j) {
    if (A.col(j).isZero(0.0)) {
      throw Error(ErrorCode::zero_column, "dr: column " + std::to_string(j) + " is zero");
    }
  }
  std::vector<Index> kept(static_cast<std::size_t>(A.cols()));
  for (Index j = 0; j < A.cols(); ++j) kept[static_cast<std::size_t>(j)] = j;

  for (Index i = 0; i < A.cols(); ++i) {
    const Matrix rest = gather_except(A, kept, i);
    if (cone_membership(rest, A.col(i), options.eps_feas, options.tol_nnls).inside) {
      std::erase(kept, i);
    }
  }
  return IndexSet::from_unsorted(std::move(kept));
}

DrsResult drs(const Matrix& A, Index p, std::uint64_t seed, const ReduceOptions& options, unsigned threads) {
  if (p < 1) throw Error(ErrorCode::invalid_argument, "drs: p must be >= 1");
  DrsResult result;
  result.partition = kmeans_partition(A, std::min(p, A.cols()), seed);

  const auto& groups = result.partition.groups;
  std::vector<IndexSet> survivors(groups.size());
  parallel_for(groups.size(), threads, [&](std::size_t u) {
    const IndexSet local = dr(select_columns(A, groups[u]), options);
    survivors[u] = groups[u].compose(local);
  });

  IndexSet merged;
  for (const auto& s : survivors) merged = merged.set_union(s);
  result.intermediate = merged;
  result.kept = merged.compose(dr(select_columns(A, merged), options));
  return result;
}

GammaReport verify_gamma(const Matrix& A, const IndexSet& K, const ReduceOptions& options) {
  K.check_bounds(A.cols());
  GammaReport report;
  if (K.empty()) {
    report.witness = A.cols() > 0 ? std::optional<Index>(0) : std::nullopt;
    return report;
  }

  const Matrix AK = select_columns(A, K);
  report.in_gamma = true;
  for (Index i = 0; i < A.cols(); ++i) {
    if (K.contains(i)) continue;
    if (!cone_membership(AK, A.col(i), options.eps_feas, options.tol_nnls).inside) {
      report.in_gamma = false;
      report.witness = i;
      break;
    }
  }

  report.minimal = true;
  for (Index k = 0; k < K.size(); ++k) {
    const Matrix rest = gather_except(A, K.values(), K[k]);
    if (cone_membership(rest, A.col(K[k]), options.eps_feas, options.tol_nnls).inside) {
      report.minimal = false;
      if (!report.witness) report.witness = K[k];
      break;
    }
  }
  return report;
}

}  // namespace conered
