#include "conered/lp.hpp"

#include <limits>
#include <vector>

namespace conered {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::iteration_limit: return "iteration-limit";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-11;

class Tableau {
 public:
  Tableau(Index rows, Index cols) : t_(Matrix::Zero(rows + 1, cols + 1)), basis_(static_cast<std::size_t>(rows), -1) {}

  Index rows() const { return t_.rows() - 1; }
  Index cols() const { return t_.cols() - 1; }
  double& at(Index i, Index j) { return t_(i, j); }
  double rhs(Index i) const { return t_(i, cols()); }
  double& rhs(Index i) { return t_(i, cols()); }
  double& cost(Index j) { return t_(rows(), j); }
  double objective_value() const { return -t_(rows(), cols()); }
  std::vector<Index>& basis() { return basis_; }

  void pivot(Index r, Index c) {
    t_.row(r) /= t_(r, c);
    for (Index i = 0; i <= rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  /// Reduced-cost row for costs `c` (length cols()).
  void price(const Vector& c) {
    t_.row(rows()).setZero();
    t_.row(rows()).head(cols()) = c.transpose();
    for (Index i = 0; i < rows(); ++i) {
      const Index b = basis_[static_cast<std::size_t>(i)];
      const double cb = c(b);
      if (cb != 0.0) t_.row(rows()) -= cb * t_.row(i);
    }
  }

  /// Runs simplex iterations over columns [0, allowed). Returns status.
  LpStatus iterate(Index allowed, const SimplexOptions& options, int& iterations) {
    int degenerate_run = 0;
    while (true) {
      const bool bland = degenerate_run > 50;
      Index enter = -1;
      double best = -options.tolerance;
      for (Index j = 0; j < allowed; ++j) {
        const double d = t_(rows(), j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return LpStatus::optimal;
      if (iterations >= options.max_iterations) return LpStatus::iteration_limit;
      ++iterations;

      Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotTol) continue;
        const double q = std::max(rhs(i), 0.0) / a;
        if (q < ratio || (q == ratio && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          ratio = q;
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::unbounded;
      degenerate_run = ratio == 0.0 ? degenerate_run + 1 : 0;
      pivot(leave, enter);
    }
  }

 private:
  Matrix t_;
  std::vector<Index> basis_;
};

}  // namespace

LpResult solve_dense_simplex(const DenseLp& lp, const SimplexOptions& options) {
  const Index n = lp.variables();
  const Index m_ub = lp.A_ub.rows();
  const Index m_eq = lp.A_eq.rows();
  if ((m_ub > 0 && lp.A_ub.cols() != n) || (m_eq > 0 && lp.A_eq.cols() != n) || lp.b_ub.size() != m_ub ||
      lp.b_eq.size() != m_eq) {
    throw Error(ErrorCode::dimension_mismatch, "simplex: inconsistent LP dimensions");
  }
  const Index rows = m_ub + m_eq;
  const Index structural = n + m_ub;  // original variables followed by slacks

  // Standard form  A_std z = b_std, z >= 0, rows flipped so b_std >= 0.
  Matrix A_std = Matrix::Zero(rows, structural);
  Vector b_std(rows);
  if (m_ub > 0) {
    A_std.topLeftCorner(m_ub, n) = lp.A_ub;
    A_std.block(0, n, m_ub, m_ub).setIdentity();
    b_std.head(m_ub) = lp.b_ub;
  }
  if (m_eq > 0) {
    A_std.bottomLeftCorner(m_eq, n) = lp.A_eq;
    b_std.tail(m_eq) = lp.b_eq;
  }
  for (Index i = 0; i < rows; ++i) {
    if (b_std(i) < 0.0) {
      A_std.row(i) *= -1.0;
      b_std(i) *= -1.0;
    }
  }

  // Rows whose slack kept a +1 coefficient start with the slack basic; the
  // rest get an artificial.
  std::vector<Index> artificial_row;
  for (Index i = 0; i < rows; ++i) {
    if (!(i < m_ub && A_std(i, n + i) > 0.0)) artificial_row.push_back(i);
  }
  const Index n_art = static_cast<Index>(artificial_row.size());
  const Index total = structural + n_art;

  Tableau tab(rows, total);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < structural; ++j) tab.at(i, j) = A_std(i, j);
    tab.rhs(i) = b_std(i);
  }
  for (Index i = 0; i < m_ub; ++i) {
    if (A_std(i, n + i) > 0.0) tab.basis()[static_cast<std::size_t>(i)] = n + i;
  }
  for (Index k = 0; k < n_art; ++k) {
    const Index i = artificial_row[static_cast<std::size_t>(k)];
    tab.at(i, structural + k) = 1.0;
    tab.basis()[static_cast<std::size_t>(i)] = structural + k;
  }

  LpResult result;
  const double scale = 1.0 + b_std.lpNorm<Eigen::Infinity>();

  if (n_art > 0) {
    Vector phase1 = Vector::Zero(total);
    phase1.tail(n_art).setOnes();
    tab.price(phase1);
    const LpStatus s = tab.iterate(total, options, result.iterations);
    if (s == LpStatus::iteration_limit) {
      result.status = s;
      return result;
    }
    if (tab.objective_value() > 1e-9 * scale) {
      result.status = LpStatus::infeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (Index i = 0; i < rows; ++i) {
      if (tab.basis()[static_cast<std::size_t>(i)] < structural) continue;
      for (Index j = 0; j < structural; ++j) {
        if (std::abs(tab.at(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  Vector phase2 = Vector::Zero(total);
  phase2.head(n) = lp.c;
  tab.price(phase2);
  result.status = tab.iterate(structural, options, result.iterations);
  if (result.status != LpStatus::optimal) return result;

  // Recompute the basic solution from the original data.
  std::vector<Index> basic_rows, basic_cols;
  for (Index i = 0; i < rows; ++i) {
    const Index b = tab.basis()[static_cast<std::size_t>(i)];
    if (b < structural) {
      basic_rows.push_back(i);
      basic_cols.push_back(b);
    }
  }
  Vector z = Vector::Zero(structural);
  for (std::size_t k = 0; k < basic_cols.size(); ++k) z(basic_cols[k]) = std::max(tab.rhs(basic_rows[k]), 0.0);
  if (!basic_cols.empty()) {
    const Matrix B = select_columns(A_std, std::span<const Index>(basic_cols));
    const Vector zb = B.colPivHouseholderQr().solve(b_std);
    bool consistent = true;
    for (std::size_t k = 0; k < basic_cols.size(); ++k) {
      if (std::abs(zb(static_cast<Index>(k)) - z(basic_cols[k])) > 1e-6 * scale) consistent = false;
    }
    if (consistent) {
      for (std::size_t k = 0; k < basic_cols.size(); ++k) z(basic_cols[k]) = std::max(zb(static_cast<Index>(k)), 0.0);
    }
  }
  result.x = z.head(n);
  result.objective = lp.c.dot(result.x);
  return result;
}

}  // namespace conered
