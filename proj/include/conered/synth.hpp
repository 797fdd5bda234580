#pragma once

#include <cstdint>
#include <vector>

#include "conered/core.hpp"

namespace conered {

/// Nearly r-separable instance A = W H + (nu / ||V||_1) V with unit-L1
/// columns in W and H. ||.||_1 is the largest column L1 norm.
struct SynthInstance {
  Matrix W;  ///< d x r
  Matrix H;  ///< r x n, H.col(pure_indices[j]) == e_j
  Matrix V;  ///< d x n noise direction
  std::vector<Index> pure_indices;
  /// Noise level at which assemble() reproduces the source data
  /// (||V||_1 for derived instances, the requested norm for random ones).
  double nu = 0.0;

  Index bands() const noexcept { return W.rows(); }
  Index pixels() const noexcept { return H.cols(); }
  Index rank() const noexcept { return W.cols(); }
};

/// Euclidean projection onto the probability simplex.
Vector project_simplex(const Vector& v);

struct SimplexLsResult {
  Vector x;
  int iterations = 0;
  double gradient_mapping_norm = 0.0;
};

/// min ||W x - a||_2^2 subject to x >= 0, sum(x) = 1. Accelerated projected
/// gradient with adaptive restart; stops when the gradient mapping has
/// norm <= tol.
SimplexLsResult simplex_least_squares(const Matrix& W, const Vector& a, double tol = 1e-8,
                                      int max_iterations = 200000);

/// Builds W, H, V from real data and identified signatures:
///   normalize the columns of A_real to unit L1 norm; match each identified
///   signature to the column with the smallest MRSA (lowest index on ties);
///   W = the matched columns; H = simplex-constrained least-squares weights
///   with the matched columns overwritten by identity columns; V = A - W H.
/// Throws duplicate_match when two signatures pick the same column.
SynthInstance derive_whv(const HsiMatrix& A_real, const Matrix& W_ident, unsigned threads = 1);

/// Random instance: W uniform in (0, 1] with unit-L1 columns; H = [I, Hbar] Pi
/// with Hbar columns Dirichlet(1) and a uniformly random placement of the
/// pure pixels; V Gaussian, scaled so ||V||_1 = noise_norm (V = 0 when
/// noise_norm = 0).
SynthInstance random_separable(Index d, Index n, Index r, std::uint64_t seed, double noise_norm = 1.0);

/// W H + (nu / ||V||_1) V. Throws invalid_argument for nu < 0 and zero_noise
/// when nu > 0 but V = 0.
HsiMatrix assemble(const SynthInstance& inst, double nu);

struct InstanceAudit {
  double w_norm_error = 0.0;  ///< max |1 - ||w_j||_1|| over columns of W
  double h_norm_error = 0.0;  ///< max |1 - ||h_i||_1|| over columns of H
  double min_w = 0.0;
  double min_h = 0.0;
  bool pure_exact = false;    ///< H.col(pure_indices[j]) == e_j bit for bit
  double noise_norm = 0.0;    ///< ||V||_1
  bool ok(double tol) const {
    return w_norm_error <= tol && h_norm_error <= tol && min_w >= 0.0 && min_h >= 0.0 && pure_exact;
  }
};

/// Checks the unit-norm, nonnegativity and pure-pixel conditions.
InstanceAudit audit_instance(const SynthInstance& inst);

}  // namespace conered
