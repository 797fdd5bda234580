#include "conered/assignment.hpp"

#include <limits>
#include <string>

namespace conered {

std::vector<Index> hungarian(const Matrix& cost) {
  const Index n = cost.rows();
  const Index m = cost.cols();
  if (n > m) throw Error(ErrorCode::dimension_mismatch, "hungarian: more rows than columns");
  if (!cost.allFinite()) throw Error(ErrorCode::invalid_argument, "hungarian: non-finite cost");
  if (n == 0) return {};

  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; p[j] is the row matched to column j (0 = free).
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<Index> p(static_cast<std::size_t>(m + 1), 0), way(static_cast<std::size_t>(m + 1), 0);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(m + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Index i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= m; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[sj];
        if (cur < minv[sj]) {
          minv[sj] = cur;
          way[sj] = j0;
        }
        if (minv[sj] < delta) {
          delta = minv[sj];
          j1 = j;
        }
      }
      for (Index j = 0; j <= m; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) {
          u[static_cast<std::size_t>(p[sj])] += delta;
          v[sj] -= delta;
        } else {
          minv[sj] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Index> row_to_col(static_cast<std::size_t>(n), -1);
  for (Index j = 1; j <= m; ++j) {
    const Index i = p[static_cast<std::size_t>(j)];
    if (i > 0) row_to_col[static_cast<std::size_t>(i - 1)] = j - 1;
  }
  return row_to_col;
}

double assignment_cost(const Matrix& cost, const std::vector<Index>& sigma) {
  double total = 0.0;
  for (std::size_t j = 0; j < sigma.size(); ++j) total += cost(sigma[j], static_cast<Index>(j));
  return total;
}

namespace {

double optimal_value(const Matrix& cost) {
  if (cost.rows() == 0) return 0.0;
  const auto rc = hungarian(cost);
  double total = 0.0;
  for (std::size_t i = 0; i < rc.size(); ++i) total += cost(static_cast<Index>(i), rc[i]);
  return total;
}

Matrix drop(const Matrix& cost, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) out(static_cast<Index>(a), static_cast<Index>(b)) = cost(rows[a], cols[b]);
  return out;
}

}  // namespace

std::vector<Index> solve_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "solve_assignment: cost must be square, got " +
                                                   std::to_string(cost.rows()) + "x" + std::to_string(cost.cols()));
  }
  const Index r = cost.rows();
  const double best = optimal_value(cost);
  const double tol = 1e-12 * (1.0 + cost.cwiseAbs().sum());

  // Fix sigma[0], sigma[1], ... to the smallest row that keeps the total optimal.
  std::vector<Index> free_rows(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) free_rows[static_cast<std::size_t>(i)] = i;
  std::vector<Index> sigma;
  double fixed = 0.0;
  for (Index j = 0; j < r; ++j) {
    std::vector<Index> rest_cols;
    for (Index c = j + 1; c < r; ++c) rest_cols.push_back(c);
    Index chosen = -1;
    for (std::size_t k = 0; k < free_rows.size(); ++k) {
      const Index i = free_rows[k];
      std::vector<Index> rest_rows = free_rows;
      rest_rows.erase(rest_rows.begin() + static_cast<std::ptrdiff_t>(k));
      const double total = fixed + cost(i, j) + optimal_value(drop(cost, rest_rows, rest_cols));
      if (total <= best + tol) {
        chosen = i;
        fixed += cost(i, j);
        free_rows = std::move(rest_rows);
        break;
      }
    }
    if (chosen < 0) {
      // Cannot happen for exact arithmetic; fall back to the Hungarian answer.
      const auto rc = hungarian(cost);
      std::vector<Index> inv(static_cast<std::size_t>(r));
      for (Index i = 0; i < r; ++i) inv[static_cast<std::size_t>(rc[static_cast<std::size_t>(i)])] = i;
      return inv;
    }
    sigma.push_back(chosen);
  }
  return sigma;
}

}  // namespace conered
