#include "conered/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "conered/parallel.hpp"
#include "conered/rng.hpp"

namespace conered {

Vector project_simplex(const Vector& v) {
  const Index n = v.size();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "project_simplex: empty vector");
  Vector u = v;
  std::sort(u.data(), u.data() + n, std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Index k = 0; k < n; ++k) {
    cumulative += u(k);
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u(k) - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

SimplexLsResult simplex_least_squares(const Matrix& W, const Vector& a, double tol, int max_iterations) {
  if (W.rows() != a.size()) throw Error(ErrorCode::dimension_mismatch, "simplex LS: W and a disagree in length");
  const Index r = W.cols();
  const Matrix G = W.transpose() * W;
  const Vector Wa = W.transpose() * a;
  const double L = std::max(Eigen::SelfAdjointEigenSolver<Matrix>(G, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff(),
                            1e-300);
  auto gradient = [&](const Vector& x) -> Vector { return G * x - Wa; };
  auto objective = [&](const Vector& x) { return 0.5 * x.dot(G * x) - Wa.dot(x); };

  SimplexLsResult res;
  Vector x = Vector::Constant(r, 1.0 / static_cast<double>(r));
  Vector y = x;
  double t = 1.0;
  double f_prev = objective(x);
  for (int k = 0; k < max_iterations; ++k) {
    const Vector mapped = project_simplex(x - gradient(x) / L);
    res.gradient_mapping_norm = L * (x - mapped).norm();
    res.iterations = k;
    if (res.gradient_mapping_norm <= tol) break;

    const Vector x_next = project_simplex(y - gradient(y) / L);
    const double f_next = objective(x_next);
    if (f_next > f_prev) {
      // Restart momentum on ascent with a plain projected-gradient step.
      t = 1.0;
      x = mapped;
      y = mapped;
      f_prev = objective(mapped);
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_next + ((t - 1.0) / t_next) * (x_next - x);
    x = x_next;
    t = t_next;
    f_prev = f_next;
  }
  res.x = x;
  return res;
}

SynthInstance derive_whv(const HsiMatrix& A_real, const Matrix& W_ident, unsigned threads) {
  const Index d = A_real.bands();
  const Index n = A_real.pixels();
  const Index r = W_ident.cols();
  if (W_ident.rows() != d) throw Error(ErrorCode::dimension_mismatch, "derive_whv: signature length differs from band count");
  if (r < 1 || r > n) throw Error(ErrorCode::bad_rank, "derive_whv: need 1 <= r <= n");

  const Matrix A = l1_normalize_columns(A_real.data());

  SynthInstance inst;
  inst.pure_indices.resize(static_cast<std::size_t>(r));
  for (Index j = 0; j < r; ++j) {
    Index best = 0;
    double best_value = mrsa(W_ident.col(j), A.col(0));
    for (Index i = 1; i < n; ++i) {
      const double value = mrsa(W_ident.col(j), A.col(i));
      if (value < best_value) {
        best_value = value;
        best = i;
      }
    }
    for (Index k = 0; k < j; ++k) {
      if (inst.pure_indices[static_cast<std::size_t>(k)] == best) {
        throw Error(ErrorCode::duplicate_match, "derive_whv: signatures " + std::to_string(k + 1) + " and " +
                                                    std::to_string(j + 1) + " both match column " +
                                                    std::to_string(best + 1));
      }
    }
    inst.pure_indices[static_cast<std::size_t>(j)] = best;
  }

  inst.W = select_columns(A, std::span<const Index>(inst.pure_indices));
  inst.H.resize(r, n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    inst.H.col(static_cast<Index>(i)) = simplex_least_squares(inst.W, A.col(static_cast<Index>(i))).x;
  });
  for (Index j = 0; j < r; ++j) {
    inst.H.col(inst.pure_indices[static_cast<std::size_t>(j)]) = Vector::Unit(r, j);
  }
  inst.V = A - inst.W * inst.H;
  inst.nu = matrix_l1_norm(inst.V);
  return inst;
}

SynthInstance random_separable(Index d, Index n, Index r, std::uint64_t seed, double noise_norm) {
  if (d < 1 || n < 1 || r < 1 || r > std::min(d, n)) {
    throw Error(ErrorCode::bad_rank, "random_separable: need 1 <= r <= min(d, n)");
  }
  if (!(noise_norm >= 0.0)) throw Error(ErrorCode::invalid_argument, "random_separable: noise norm must be >= 0");
  Rng rng(seed);
  SynthInstance inst;

  inst.W.resize(d, r);
  for (Index j = 0; j < r; ++j)
    for (Index i = 0; i < d; ++i) inst.W(i, j) = rng.uniform_open_left();
  inst.W = l1_normalize_columns(inst.W);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  order = rng.sample_without_replacement(std::move(order), static_cast<std::size_t>(n));
  inst.pure_indices.assign(order.begin(), order.begin() + r);

  inst.H = Matrix::Zero(r, n);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Index col = order[k];
    if (static_cast<Index>(k) < r) {
      inst.H(static_cast<Index>(k), col) = 1.0;
      continue;
    }
    for (Index j = 0; j < r; ++j) inst.H(j, col) = rng.exponential();
    inst.H.col(col) /= inst.H.col(col).sum();
  }

  inst.V = Matrix::Zero(d, n);
  if (noise_norm > 0.0) {
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < d; ++i) inst.V(i, j) = rng.normal();
    inst.V *= noise_norm / matrix_l1_norm(inst.V);
  }
  inst.nu = noise_norm;
  return inst;
}

HsiMatrix assemble(const SynthInstance& inst, double nu) {
  if (!(nu >= 0.0)) throw Error(ErrorCode::invalid_argument, "assemble: nu must be >= 0");
  Matrix A = inst.W * inst.H;
  if (nu > 0.0) {
    const double vn = matrix_l1_norm(inst.V);
    if (vn == 0.0) throw Error(ErrorCode::zero_noise, "assemble: nu > 0 requested but V = 0");
    A += (nu / vn) * inst.V;
  }
  return HsiMatrix(std::move(A));
}

InstanceAudit audit_instance(const SynthInstance& inst) {
  InstanceAudit audit;
  audit.w_norm_error = (inst.W.cwiseAbs().colwise().sum().array() - 1.0).abs().maxCoeff();
  audit.h_norm_error = (inst.H.cwiseAbs().colwise().sum().array() - 1.0).abs().maxCoeff();
  audit.min_w = inst.W.minCoeff();
  audit.min_h = inst.H.minCoeff();
  audit.pure_exact = static_cast<Index>(inst.pure_indices.size()) == inst.rank();
  for (std::size_t j = 0; j < inst.pure_indices.size() && audit.pure_exact; ++j) {
    const Index col = inst.pure_indices[j];
    audit.pure_exact = col >= 0 && col < inst.pixels() && inst.H.col(col) == Vector::Unit(inst.rank(), static_cast<Index>(j));
  }
  audit.noise_norm = matrix_l1_norm(inst.V);
  return audit;
}

}  // namespace conered
