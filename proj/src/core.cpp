#include "conered/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace conered {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::zero_column: return "zero_column";
    case ErrorCode::degenerate_vector: return "degenerate_vector";
    case ErrorCode::max_iterations: return "max_iterations";
    case ErrorCode::rank_too_large: return "rank_too_large";
    case ErrorCode::bad_rank: return "bad_rank";
    case ErrorCode::iteration_limit: return "iteration_limit";
    case ErrorCode::numerical_breakdown: return "numerical_breakdown";
    case ErrorCode::degenerate_diagonal: return "degenerate_diagonal";
    case ErrorCode::insufficient_columns: return "insufficient_columns";
    case ErrorCode::duplicate_match: return "duplicate_match";
    case ErrorCode::zero_noise: return "zero_noise";
    case ErrorCode::too_many_columns: return "too_many_columns";
    case ErrorCode::k_smaller_than_r: return "k_smaller_than_r";
  }
  return "unknown";
}

HsiMatrix::HsiMatrix(Matrix data) : data_(std::move(data)) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw Error(ErrorCode::dimension_mismatch, "HSI matrix must have at least one row and one column");
  }
  if (!data_.allFinite()) {
    throw Error(ErrorCode::invalid_argument, "HSI matrix contains non-finite values");
  }
}

IndexSet::IndexSet(std::initializer_list<Index> indices) {
  *this = from_unsorted(std::vector<Index>(indices));
}

IndexSet IndexSet::from_unsorted(std::vector<Index> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  IndexSet out;
  out.indices_ = std::move(indices);
  return out;
}

IndexSet IndexSet::range(Index n) {
  IndexSet out;
  out.indices_.resize(static_cast<std::size_t>(std::max<Index>(n, 0)));
  for (Index i = 0; i < n; ++i) out.indices_[static_cast<std::size_t>(i)] = i;
  return out;
}

bool IndexSet::contains(Index i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

void IndexSet::check_bounds(Index n) const {
  if (!indices_.empty() && (indices_.front() < 0 || indices_.back() >= n)) {
    throw Error(ErrorCode::invalid_argument,
                "index set out of range for a matrix with " + std::to_string(n) + " columns");
  }
}

IndexSet IndexSet::compose(const IndexSet& positions) const {
  positions.check_bounds(size());
  IndexSet out;
  out.indices_.reserve(positions.indices_.size());
  // positions ascending and indices_ ascending, so the image is ascending too
  for (Index j : positions) out.indices_.push_back((*this)[j]);
  return out;
}

IndexSet IndexSet::set_union(const IndexSet& other) const {
  IndexSet out;
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out.indices_));
  return out;
}

IndexSet IndexSet::complement(Index n) const {
  IndexSet out;
  auto it = indices_.begin();
  for (Index i = 0; i < n; ++i) {
    while (it != indices_.end() && *it < i) ++it;
    if (it != indices_.end() && *it == i) continue;
    out.indices_.push_back(i);
  }
  return out;
}

void ToleranceConfig::validate() const {
  if (!(eps_feas > 0) || !(tol_nnls > 0) || !(tol_lp > 0) || !(norm_tol > 0)) {
    throw Error(ErrorCode::invalid_argument, "all tolerances must be strictly positive");
  }
}

Matrix select_columns(const Matrix& A, std::span<const Index> columns) {
  Matrix out(A.rows(), static_cast<Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    out.col(static_cast<Index>(k)) = A.col(columns[k]);
  }
  return out;
}

Matrix select_columns(const Matrix& A, const IndexSet& columns) {
  columns.check_bounds(A.cols());
  return select_columns(A, std::span<const Index>(columns.values()));
}

double matrix_l1_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  return A.cwiseAbs().colwise().sum().maxCoeff();
}

Matrix l1_normalize_columns(const Matrix& A) {
  Matrix out(A.rows(), A.cols());
  for (Index j = 0; j < A.cols(); ++j) {
    const double norm = A.col(j).lpNorm<1>();
    if (norm == 0.0) {
      throw Error(ErrorCode::zero_column, "column " + std::to_string(j) + " has zero L1 norm");
    }
    out.col(j) = A.col(j) / norm;
  }
  return out;
}

HsiMatrix l1_normalize_columns(const HsiMatrix& A) {
  return HsiMatrix(l1_normalize_columns(A.data()));
}

double mrsa(const Vector& a, const Vector& b, double norm_tol) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::dimension_mismatch, "mrsa: vectors differ in length");
  }
  if (a.size() < 2) {
    throw Error(ErrorCode::degenerate_vector, "mrsa: vectors need at least two entries");
  }
  Vector u = a.array() - a.mean();
  Vector v = b.array() - b.mean();
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu < norm_tol || nv < norm_tol) {
    throw Error(ErrorCode::degenerate_vector, "mrsa: mean-removed vector is (numerically) zero");
  }
  u /= nu;
  v /= nv;
  // 2*atan2(|u-v|, |u+v|) is the angle between unit vectors; unlike acos of
  // the cosine it stays accurate near 0 and pi.
  const double angle = 2.0 * std::atan2((u - v).norm(), (u + v).norm());
  return std::clamp(angle / std::numbers::pi, 0.0, 1.0);
}

}  // namespace conered
