#include "conered/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conered/assignment.hpp"
#include "conered/lp.hpp"
#include "conered/nnls.hpp"

namespace conered {
namespace {

double distance(const Vector& a, const Vector& b, DistanceMetric metric) {
  return metric == DistanceMetric::l1 ? (a - b).lpNorm<1>() : kMrsaReportScale * mrsa(a, b);
}

}  // namespace

double rho(const Matrix& W) {
  const Index d = W.rows();
  const Index r = W.cols();
  if (r > kRhoMaxColumns) {
    throw Error(ErrorCode::too_many_columns,
                "rho: " + std::to_string(r) + " columns exceed the exact limit of " + std::to_string(kRhoMaxColumns));
  }
  if (r == 0 || d == 0) throw Error(ErrorCode::invalid_argument, "rho: empty matrix");

  // Variables y = S x >= 0 (r of them) followed by t (d of them).
  DenseLp lp;
  lp.c = Vector::Zero(r + d);
  lp.c.tail(d).setOnes();
  lp.A_ub = Matrix::Zero(2 * d, r + d);
  lp.A_ub.block(0, r, d, d) = -Matrix::Identity(d, d);
  lp.A_ub.block(d, r, d, d) = -Matrix::Identity(d, d);
  lp.b_ub = Vector::Zero(2 * d);
  lp.A_eq = Matrix::Zero(1, r + d);
  lp.A_eq.leftCols(r).setOnes();
  lp.b_eq = Vector::Ones(1);

  double best = std::numeric_limits<double>::infinity();
  const unsigned long patterns = 1ul << (r - 1);
  for (unsigned long mask = 0; mask < patterns; ++mask) {
    Matrix WS = W;
    for (Index i = 1; i < r; ++i) {
      if (mask & (1ul << (i - 1))) WS.col(i) *= -1.0;
    }
    lp.A_ub.block(0, 0, d, r) = WS;
    lp.A_ub.block(d, 0, d, r) = -WS;
    const LpResult res = solve_dense_simplex(lp);
    if (res.status != LpStatus::optimal) {
      throw Error(ErrorCode::numerical_breakdown, std::string("rho: sign-pattern LP ended ") + to_string(res.status));
    }
    // Evaluate at the returned point rather than trusting the LP objective.
    Vector x = res.x.head(r);
    for (Index i = 1; i < r; ++i) {
      if (mask & (1ul << (i - 1))) x(i) = -x(i);
    }
    x /= x.lpNorm<1>();
    best = std::min(best, (W * x).lpNorm<1>());
  }
  return best;
}

double reconstruction_error(const Matrix& Ap, const IndexSet& K, double tol_nnls) {
  if (K.empty()) throw Error(ErrorCode::invalid_argument, "reconstruction_error: K is empty");
  K.check_bounds(Ap.cols());
  const Matrix AK = select_columns(Ap, K);
  double total = 0.0;
  for (Index i = 0; i < Ap.cols(); ++i) {
    const double res = K.contains(i) ? 0.0 : nnls_solve(AK, Ap.col(i), tol_nnls).residual_norm;
    total += res * res;
  }
  return std::sqrt(total / static_cast<double>(Ap.rows() * Ap.cols()));
}

double dict_distance(const Matrix& A, const IndexSet& S, const Matrix& W, DistanceMetric metric) {
  if (S.empty()) throw Error(ErrorCode::invalid_argument, "dict_distance: S is empty");
  if (A.rows() != W.rows()) throw Error(ErrorCode::dimension_mismatch, "dict_distance: band counts differ");
  S.check_bounds(A.cols());
  double total = 0.0;
  for (Index i = 0; i < W.cols(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Index k : S) {
      nearest = std::min(nearest, distance(W.col(i), A.col(k), metric));
    }
    total += nearest;
  }
  return total / static_cast<double>(W.cols());
}

MatchScore match_columns(const Matrix& W_ref, const Matrix& W_est, DistanceMetric metric) {
  if (W_ref.rows() != W_est.rows() || W_ref.cols() != W_est.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "match_columns: W_ref and W_est differ in shape");
  }
  const Index r = W_ref.cols();
  if (r == 0) throw Error(ErrorCode::invalid_argument, "match_columns: no columns");
  Matrix cost(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) cost(i, j) = distance(W_ref.col(i), W_est.col(j), metric);

  MatchScore out;
  out.sigma = solve_assignment(cost);
  out.per_col.resize(static_cast<std::size_t>(r));
  for (Index j = 0; j < r; ++j) {
    out.per_col[static_cast<std::size_t>(j)] = cost(out.sigma[static_cast<std::size_t>(j)], j);
    out.score += out.per_col[static_cast<std::size_t>(j)];
  }
  out.score /= static_cast<double>(r);
  return out;
}

std::vector<double> max_abundance(const Matrix& H, const IndexSet& K) {
  K.check_bounds(H.cols());
  std::vector<double> mu(static_cast<std::size_t>(H.rows()), -std::numeric_limits<double>::infinity());
  for (Index j = 0; j < H.rows(); ++j)
    for (Index k : K) mu[static_cast<std::size_t>(j)] = std::max(mu[static_cast<std::size_t>(j)], H(j, k));
  return mu;
}

TheoremReport theorem1_check(const SynthInstance& inst, double nu, const IndexSet& K) {
  const Index r = inst.rank();
  if (K.size() < r) {
    throw Error(ErrorCode::k_smaller_than_r,
                "theorem1_check: |K| = " + std::to_string(K.size()) + " < r = " + std::to_string(r));
  }
  const HsiMatrix A = assemble(inst, nu);
  K.check_bounds(A.pixels());

  TheoremReport rep;
  rep.rho = rho(inst.W);
  rep.epsilon = matrix_l1_norm(A.data() - inst.W * inst.H);
  rep.hypothesis_holds = rep.epsilon < rep.rho / 9.0;
  rep.bound = (9.0 / rep.rho + 1.0) * rep.epsilon;

  Matrix cost(r, K.size());
  for (Index j = 0; j < r; ++j)
    for (Index c = 0; c < K.size(); ++c) cost(j, c) = (inst.W.col(j) - A.column(K[c])).lpNorm<1>();
  const std::vector<Index> match = hungarian(cost);

  rep.satisfied = true;
  for (Index j = 0; j < r; ++j) {
    const Index c = match[static_cast<std::size_t>(j)];
    const double dist = cost(j, c);
    rep.chosen.push_back(K[c]);
    rep.per_j_l1.push_back(dist);
    const bool ok = dist < rep.bound || (rep.epsilon == 0.0 && dist == 0.0);
    rep.satisfied = rep.satisfied && ok;
  }

  rep.mu = max_abundance(inst.H, K);
  rep.mu_bound = rep.epsilon < 1.0 ? 4.0 * rep.epsilon / (rep.rho * (1.0 - rep.epsilon))
                                   : std::numeric_limits<double>::infinity();
  rep.mu_satisfied = rep.mu_bound < 0.5;
  for (double m : rep.mu) rep.mu_satisfied = rep.mu_satisfied && (1.0 - m <= rep.mu_bound);
  return rep;
}

}  // namespace conered
