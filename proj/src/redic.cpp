#include "conered/redic.hpp"

#include <string>

#include "conered/assignment.hpp"
#include "conered/dimred.hpp"
#include "conered/parallel.hpp"
#include "conered/reduce.hpp"
#include "conered/rng.hpp"

namespace conered {

std::vector<Index> alignment_permutation(const Matrix& C, const Matrix& W_j) {
  if (C.rows() != W_j.rows() || C.cols() != W_j.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "align_columns: shapes differ");
  }
  const Index r = C.cols();
  Matrix cost(r, r);
  for (Index a = 0; a < r; ++a)
    for (Index b = 0; b < r; ++b) cost(a, b) = mrsa(W_j.col(a), C.col(b));
  return solve_assignment(cost);
}

Matrix align_columns(const Matrix& C, const Matrix& W_j) {
  return select_columns(W_j, std::span<const Index>(alignment_permutation(C, W_j)));
}

IndexSet draw_augmentation(const IndexSet& K, Index n, Index lambda, std::uint64_t seed, std::uint64_t repetition) {
  const IndexSet rest = K.complement(n);
  if (lambda < 0) throw Error(ErrorCode::invalid_argument, "lambda must be >= 0");
  if (lambda > rest.size()) {
    throw Error(ErrorCode::insufficient_columns, "lambda = " + std::to_string(lambda) + " exceeds the " +
                                                     std::to_string(rest.size()) + " columns outside K");
  }
  Rng rng = Rng::stream(seed, repetition);
  return IndexSet::from_unsorted(rng.sample_without_replacement(rest.values(), static_cast<std::size_t>(lambda)));
}

EndmemberEstimate redic(const HsiMatrix& A, const RedicConfig& cfg, unsigned threads) {
  cfg.tolerances.validate();
  if (cfg.r < 1 || cfg.r > std::min(A.bands(), A.pixels())) {
    throw Error(ErrorCode::bad_rank, "redic: need 1 <= r <= min(d, n)");
  }
  if (cfg.tau < 1) throw Error(ErrorCode::invalid_argument, "redic: tau must be >= 1");
  if (cfg.lambda < 0) throw Error(ErrorCode::invalid_argument, "redic: lambda must be >= 0");
  if (cfg.p < 1) throw Error(ErrorCode::invalid_argument, "redic: p must be >= 1");

  const Index n = A.pixels();
  const Matrix Ap = reduce_dimension(A.data(), cfg.r);
  const ReduceOptions ropts{cfg.tolerances.eps_feas, cfg.tolerances.tol_nnls};
  // Stream 0 feeds k-means; repetition j uses stream j.
  const std::uint64_t kmeans_seed = Rng::stream(cfg.seed, 0)();

  EndmemberEstimate est;
  est.reduced = drs(Ap, cfg.p, kmeans_seed, ropts, threads).kept;
  if (cfg.lambda > n - est.reduced.size()) {
    throw Error(ErrorCode::insufficient_columns, "lambda = " + std::to_string(cfg.lambda) + " exceeds the " +
                                                     std::to_string(n - est.reduced.size()) + " columns outside K");
  }

  const auto tau = static_cast<std::size_t>(cfg.tau);
  est.per_rep.resize(tau);
  est.selected_indices.resize(tau);
  est.trace.resize(tau);
  parallel_for(tau, threads, [&](std::size_t j) {
    RepetitionTrace& tr = est.trace[j];
    tr.augmented = draw_augmentation(est.reduced, n, cfg.lambda, cfg.seed, j + 1);
    const IndexSet S = est.reduced.set_union(tr.augmented);
    const ModelH model(select_columns(Ap, S), cfg.r);
    tr.lp = solve_model_h(model, cfg.tolerances.tol_lp, cfg.ipm);
    if (tr.lp.status != LpStatus::optimal) {
      throw Error(ErrorCode::numerical_breakdown,
                  "redic: LP of repetition " + std::to_string(j + 1) + " ended " + to_string(tr.lp.status));
    }
    const IndexSet chosen = S.compose(postprocess_method_c(model.data(), tr.lp.X, cfg.r));
    est.selected_indices[j] = chosen.values();
    est.per_rep[j] = select_columns(A.data(), chosen);
  });

  Matrix sum = est.per_rep[0];
  for (std::size_t j = 1; j < tau; ++j) {
    const Matrix C = sum / static_cast<double>(j);
    const std::vector<Index> perm = alignment_permutation(C, est.per_rep[j]);
    est.per_rep[j] = select_columns(est.per_rep[j], std::span<const Index>(perm));
    std::vector<Index> reordered(perm.size());
    for (std::size_t c = 0; c < perm.size(); ++c) reordered[c] = est.selected_indices[j][static_cast<std::size_t>(perm[c])];
    est.selected_indices[j] = std::move(reordered);
    sum += est.per_rep[j];
  }
  est.W_hat = sum / static_cast<double>(tau);
  return est;
}

}  // namespace conered
