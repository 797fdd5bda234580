#pragma once

#include <vector>

#include "conered/core.hpp"
#include "conered/synth.hpp"

namespace conered {

/// MRSA values printed or returned by the scoring functions below are
/// multiplied by this factor; mrsa() itself stays in [0, 1].
inline constexpr double kMrsaReportScale = 100.0;

/// Largest column count accepted by rho().
inline constexpr Index kRhoMaxColumns = 12;

/// rho(W) = min ||W x||_1 over ||x||_1 = 1. One LP per sign pattern s with
/// s_0 = +1 (patterns s and -s give the same value):
///   min sum t  s.t.  -t <= W x <= t,  sum s_i x_i = 1,  s_i x_i >= 0.
/// Throws too_many_columns when W has more than kRhoMaxColumns columns.
double rho(const Matrix& W);

/// sqrt( sum_i ||Ap(K) x_i - ap_i||_2^2 / (r n) ) with x_i the NNLS solution
/// and r = Ap.rows().
double reconstruction_error(const Matrix& Ap, const IndexSet& K, double tol_nnls = 1e-10);

enum class DistanceMetric { l1, mrsa };

/// (1/r) sum_i min_{k in S} dist(w_i, a_k). MRSA distances are on the
/// reporting (x100) scale.
double dict_distance(const Matrix& A, const IndexSet& S, const Matrix& W, DistanceMetric metric);

struct MatchScore {
  /// sigma[j] = reference column matched to estimated column j
  std::vector<Index> sigma;
  std::vector<double> per_col;  ///< MRSA on the x100 scale
  double score = 0.0;           ///< mean of per_col
};

/// Pairs the columns of W_est with those of W_ref by a minimum-total-distance
/// assignment and reports the matched distances.
MatchScore match_columns(const Matrix& W_ref, const Matrix& W_est, DistanceMetric metric);

inline MatchScore mrsa_score(const Matrix& W_ref, const Matrix& W_est) {
  return match_columns(W_ref, W_est, DistanceMetric::mrsa);
}

struct TheoremReport {
  double rho = 0.0;
  double epsilon = 0.0;           ///< ||A - W H||_1 of the assembled matrix
  bool hypothesis_holds = false;  ///< epsilon < rho / 9
  std::vector<Index> chosen;      ///< k_j, distinct elements of K
  std::vector<double> per_j_l1;   ///< ||w_j - a_{k_j}||_1
  double bound = 0.0;             ///< (9 / rho + 1) epsilon
  bool satisfied = false;

  std::vector<double> mu;         ///< max_{k in K} H(j, k)
  double mu_bound = 0.0;          ///< 4 epsilon / (rho (1 - epsilon)), inf if epsilon >= 1
  bool mu_satisfied = false;      ///< 1 - mu_j <= mu_bound for all j, and mu_bound < 1/2
};

/// Assembles A = W H + (nu / ||V||_1) V and checks the conclusion of the
/// separability error bound for the column subset K: r distinct columns of
/// A(K) within (9/rho + 1) epsilon of the columns of W in L1. The k_j come
/// from a minimum-cost assignment on the L1 distances. For epsilon = 0 the
/// strict inequality degenerates and exact matches count as satisfied.
/// Throws k_smaller_than_r when |K| < r.
TheoremReport theorem1_check(const SynthInstance& inst, double nu, const IndexSet& K);

/// mu(j) = max_{k in K} H(j, k) for every row j of H.
std::vector<double> max_abundance(const Matrix& H, const IndexSet& K);

}  // namespace conered
