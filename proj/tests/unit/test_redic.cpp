#include <doctest.h>

#include <map>
#include <numeric>

#include "check_error.hpp"
#include "conered/eval.hpp"
#include "conered/redic.hpp"
#include "conered/synth.hpp"
#include "oracles.hpp"

using namespace conered;

namespace {

double total_mrsa(const Matrix& C, const Matrix& W) {
  double s = 0.0;
  for (Index c = 0; c < C.cols(); ++c) s += mrsa(C.col(c), W.col(c));
  return s;
}

}  // namespace

TEST_CASE("align_columns examples") {
  const Matrix C = oracle::random_matrix(7, 4, 1);
  CHECK(alignment_permutation(C, C) == std::vector<Index>{0, 1, 2, 3});
  CHECK(total_mrsa(C, align_columns(C, C)) <= 1e-7);
  const Matrix reversed = C.rowwise().reverse();
  CHECK(alignment_permutation(C, reversed) == std::vector<Index>{3, 2, 1, 0});
  CHECK(align_columns(C, reversed) == C);
}

TEST_CASE("align_columns matches enumeration for r up to 6") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Index r = 1 + static_cast<Index>(seed % 6);
    const Matrix C = oracle::random_matrix(8, r, seed);
    const Matrix W = oracle::random_matrix(8, r, seed + 500);
    const double got = total_mrsa(C, align_columns(C, W));
    std::vector<Index> perm(static_cast<std::size_t>(r));
    std::iota(perm.begin(), perm.end(), Index{0});
    do {
      CHECK(got <= total_mrsa(C, select_columns(W, std::span<const Index>(perm))) + 1e-12);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("augmentation draws are uniform without replacement") {
  const IndexSet K{1, 4};
  const Index n = 8;
  std::map<Index, int> counts;
  const int draws = 6000;
  for (int s = 0; s < draws; ++s) {
    const IndexSet add = draw_augmentation(K, n, 2, static_cast<std::uint64_t>(s), 1);
    CHECK(add.size() == 2);
    for (Index i : add) {
      CHECK_FALSE(K.contains(i));
      ++counts[i];
    }
  }
  // 6 eligible columns, each expected in 2/6 of the draws.
  const double expected = draws * 2.0 / 6.0;
  double chi2 = 0.0;
  for (const auto& [i, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(counts.size() == 6);
  CHECK(chi2 < 20.5);  // 99.9% quantile of chi-square with 5 degrees of freedom
  CHECK_ERROR_CODE(draw_augmentation(K, n, 7, 0, 1), ErrorCode::insufficient_columns);
}

TEST_CASE("noiseless recovery with one repetition") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SynthInstance inst = random_separable(12, 80, 3, seed, 0.0);
    const HsiMatrix A = assemble(inst, 0.0);
    RedicConfig cfg;
    cfg.r = 3;
    cfg.seed = seed;
    const EndmemberEstimate est = redic(A, cfg);
    CHECK(est.reduced.size() == 3);
    CHECK(est.W_hat == est.per_rep[0]);
    CHECK(mrsa_score(inst.W, est.W_hat).score <= 1e-6);
    std::vector<Index> sel = est.selected_indices[0];
    std::sort(sel.begin(), sel.end());
    std::vector<Index> pure = inst.pure_indices;
    std::sort(pure.begin(), pure.end());
    CHECK(sel == pure);
  }
}

TEST_CASE("lambda = 0 makes every repetition identical") {
  const SynthInstance inst = random_separable(10, 60, 3, 4);
  const HsiMatrix A = assemble(inst, 0.2);
  RedicConfig cfg;
  cfg.r = 3;
  cfg.tau = 4;
  const EndmemberEstimate est = redic(A, cfg, 2);
  for (const Matrix& W : est.per_rep) CHECK(W == est.per_rep[0]);
  CHECK((est.W_hat - est.per_rep[0]).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("averaging, provenance and determinism with augmentation") {
  const SynthInstance inst = random_separable(10, 80, 3, 6);
  const HsiMatrix A = assemble(inst, 0.3);
  RedicConfig cfg;
  cfg.r = 3;
  cfg.lambda = 4;
  cfg.tau = 3;
  cfg.seed = 99;
  const EndmemberEstimate est = redic(A, cfg, 1);
  Matrix sum = Matrix::Zero(10, 3);
  for (std::size_t j = 0; j < est.per_rep.size(); ++j) {
    sum += est.per_rep[j];
    for (Index c = 0; c < 3; ++c) CHECK(est.per_rep[j].col(c) == A.column(est.selected_indices[j][static_cast<std::size_t>(c)]));
    CHECK(est.trace[j].augmented.size() == 4);
  }
  CHECK((est.W_hat - sum / 3.0).cwiseAbs().maxCoeff() <= 1e-12);

  const EndmemberEstimate again = redic(A, cfg, 3);
  CHECK(again.W_hat == est.W_hat);
  CHECK(again.selected_indices == est.selected_indices);
}

TEST_CASE("redic validates its configuration") {
  const SynthInstance inst = random_separable(6, 20, 2, 1, 0.0);
  const HsiMatrix A = assemble(inst, 0.0);
  RedicConfig cfg;
  cfg.r = 2;
  cfg.lambda = 19;
  CHECK_ERROR_CODE(redic(A, cfg), ErrorCode::insufficient_columns);
  cfg.lambda = 0;
  cfg.tau = 0;
  CHECK_ERROR_CODE(redic(A, cfg), ErrorCode::invalid_argument);
  cfg.tau = 1;
  cfg.r = 7;
  CHECK_ERROR_CODE(redic(A, cfg), ErrorCode::bad_rank);
}
