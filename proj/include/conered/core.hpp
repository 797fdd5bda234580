#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <span>
#include <vector>

#include "conered/error.hpp"

namespace conered {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense d x n matrix whose columns are spectral signatures (one per pixel).
/// Construction rejects empty shapes and non-finite values; after that the
/// object is immutable.
class HsiMatrix {
 public:
  explicit HsiMatrix(Matrix data);

  Index bands() const noexcept { return data_.rows(); }
  Index pixels() const noexcept { return data_.cols(); }
  const Matrix& data() const noexcept { return data_; }
  auto column(Index j) const { return data_.col(j); }

 private:
  Matrix data_;
};

/// Strictly increasing set of 0-based column indices.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<Index> indices);

  /// Sorts and deduplicates.
  static IndexSet from_unsorted(std::vector<Index> indices);
  /// {0, 1, ..., n-1}
  static IndexSet range(Index n);

  Index size() const noexcept { return static_cast<Index>(indices_.size()); }
  bool empty() const noexcept { return indices_.empty(); }
  Index operator[](Index k) const { return indices_[static_cast<std::size_t>(k)]; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  const std::vector<Index>& values() const noexcept { return indices_; }

  bool contains(Index i) const;
  /// Throws if any index is outside [0, n).
  void check_bounds(Index n) const;

  /// Maps positions into this set back to the values they address, i.e.
  /// I(J) = { i_j | j in J } with I sorted ascending.
  IndexSet compose(const IndexSet& positions) const;
  IndexSet set_union(const IndexSet& other) const;
  /// Elements of [0, n) not in this set.
  IndexSet complement(Index n) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<Index> indices_;
};

struct ToleranceConfig {
  /// Residual threshold below which a column counts as inside a cone.
  double eps_feas = 1e-8;
  /// Gradient threshold of the NNLS optimality test.
  double tol_nnls = 1e-10;
  /// Feasibility/optimality tolerance for LP solutions.
  double tol_lp = 1e-7;
  /// Smallest norm accepted when normalizing or forming angles.
  double norm_tol = 1e-12;

  /// Throws invalid_argument unless every field is strictly positive.
  void validate() const;
};

Matrix select_columns(const Matrix& A, const IndexSet& columns);
Matrix select_columns(const Matrix& A, std::span<const Index> columns);

/// Induced matrix 1-norm: the largest column L1 norm.
double matrix_l1_norm(const Matrix& A);

/// Divides each column by its L1 norm. Throws zero_column on an all-zero column.
Matrix l1_normalize_columns(const Matrix& A);
HsiMatrix l1_normalize_columns(const HsiMatrix& A);

/// Mean-removed spectral angle in [0, 1]: the angle between a - mean(a) * 1
/// and b - mean(b) * 1, divided by pi. Throws degenerate_vector when either
/// mean-removed vector has norm below `norm_tol`.
double mrsa(const Vector& a, const Vector& b, double norm_tol = 1e-12);

}  // namespace conered
