#include "conered/nnls.hpp"

#include <string>
#include <vector>

namespace conered {
namespace {

// Least-squares solution restricted to the passive columns.
Vector solve_passive(const Matrix& B, const Vector& y, const std::vector<Index>& passive) {
  if (passive.empty()) return Vector(0);
  Matrix Bp(B.rows(), static_cast<Index>(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) Bp.col(static_cast<Index>(k)) = B.col(passive[k]);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Bp);
  return cod.solve(y);
}

}  // namespace

NnlsResult nnls_solve(const Matrix& B, const Vector& y, double tol_nnls, int max_iterations) {
  if (B.cols() < 1) throw Error(ErrorCode::invalid_argument, "nnls: B needs at least one column");
  if (B.rows() != y.size()) throw Error(ErrorCode::dimension_mismatch, "nnls: B and y row counts differ");

  const Index m = B.cols();
  const int cap = max_iterations > 0 ? max_iterations : static_cast<int>(10 * m);

  NnlsResult result;
  result.x = Vector::Zero(m);
  Vector& x = result.x;

  std::vector<char> in_passive(static_cast<std::size_t>(m), 0);
  std::vector<char> rejected(static_cast<std::size_t>(m), 0);
  Vector w = B.transpose() * y;

  while (true) {
    Index enter = -1;
    double best = tol_nnls;
    for (Index j = 0; j < m; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (in_passive[uj] || rejected[uj]) continue;
      if (w(j) > best) {
        best = w(j);
        enter = j;
      }
    }
    if (enter < 0) break;
    if (++result.iterations > cap) {
      throw Error(ErrorCode::max_iterations,
                  "nnls: active-set loop exceeded " + std::to_string(cap) + " iterations");
    }

    in_passive[static_cast<std::size_t>(enter)] = 1;
    bool first_pass = true;
    bool accepted = true;
    std::vector<Index> passive;
    Vector z;
    while (true) {
      passive.clear();
      for (Index j = 0; j < m; ++j) {
        if (in_passive[static_cast<std::size_t>(j)]) passive.push_back(j);
      }
      z = solve_passive(B, y, passive);

      if (first_pass) {
        first_pass = false;
        // Rounding can make the entering coefficient non-positive; taking the
        // step would only drop it again, so skip it until x changes.
        for (std::size_t k = 0; k < passive.size(); ++k) {
          if (passive[k] == enter && z(static_cast<Index>(k)) <= 0.0) accepted = false;
        }
        if (!accepted) {
          in_passive[static_cast<std::size_t>(enter)] = 0;
          rejected[static_cast<std::size_t>(enter)] = 1;
          break;
        }
      }

      double alpha = 2.0;
      std::size_t blocking = passive.size();
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const double zk = z(static_cast<Index>(k));
        if (zk <= 0.0) {
          const double xk = x(passive[k]);
          const double step = xk / (xk - zk);
          if (step < alpha) {
            alpha = step;
            blocking = k;
          }
        }
      }
      if (blocking == passive.size()) break;  // z > 0 on the whole passive set

      for (std::size_t k = 0; k < passive.size(); ++k) {
        const Index j = passive[k];
        x(j) += alpha * (z(static_cast<Index>(k)) - x(j));
      }
      // The blocking variable is exactly zero in exact arithmetic; others that
      // rounded to zero or below leave as well.
      x(passive[blocking]) = 0.0;
      for (const Index j : passive) {
        if (x(j) <= 0.0) {
          x(j) = 0.0;
          in_passive[static_cast<std::size_t>(j)] = 0;
        }
      }
    }
    if (!accepted) continue;

    x.setZero();
    for (std::size_t k = 0; k < passive.size(); ++k) x(passive[k]) = z(static_cast<Index>(k));
    std::fill(rejected.begin(), rejected.end(), 0);
    w = B.transpose() * (y - B * x);
  }

  result.residual_norm = (B * x - y).norm();
  return result;
}

MembershipResult cone_membership(const Matrix& Asub, const Vector& a, double eps_feas, double tol_nnls) {
  MembershipResult out;
  if (Asub.cols() == 0) {
    out.nnls.x = Vector(0);
    out.nnls.residual_norm = a.norm();
  } else {
    out.nnls = nnls_solve(Asub, a, tol_nnls);
  }
  out.inside = out.nnls.residual_norm < eps_feas;
  return out;
}

}  // namespace conered
