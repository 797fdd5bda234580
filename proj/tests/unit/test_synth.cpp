#include <doctest.h>

#include <algorithm>

#include "check_error.hpp"
#include "conered/eval.hpp"
#include "conered/synth.hpp"
#include "oracles.hpp"

using namespace conered;

TEST_CASE("simplex projection agrees with bisection") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Vector v = oracle::random_matrix(1 + static_cast<Index>(seed % 7), 1, seed, -2.0, 2.0).col(0);
    const Vector p = project_simplex(v);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
    CHECK((p - oracle::project_simplex_bisect(v)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("simplex least squares matches projected gradient") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Matrix W = oracle::random_matrix(4, 3, seed);
    const Vector a = oracle::random_matrix(4, 1, seed + 50).col(0);
    const SimplexLsResult res = simplex_least_squares(W, a);
    const Vector ref = oracle::simplex_ls_projected_gradient(W, a);
    CHECK(res.gradient_mapping_norm <= 1e-8);
    CHECK(std::abs((W * res.x - a).squaredNorm() - (W * ref - a).squaredNorm()) <= 1e-6);
    CHECK(std::abs(res.x.sum() - 1.0) <= 1e-8);
    CHECK(res.x.minCoeff() >= -1e-10);
  }
}

TEST_CASE("random instances pass the audit") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Index r = 1 + static_cast<Index>(seed % 5);
    const double noise = 0.25 * static_cast<double>(seed % 4);
    const SynthInstance inst = random_separable(r + 3, 30, r, seed, noise);
    const InstanceAudit audit = audit_instance(inst);
    CHECK(audit.ok(1e-12));
    CHECK(std::abs(audit.noise_norm - noise) <= 1e-12);
    CHECK(inst.nu == noise);
  }
}

TEST_CASE("random instances are reproducible") {
  const SynthInstance a = random_separable(6, 20, 3, 17);
  const SynthInstance b = random_separable(6, 20, 3, 17);
  CHECK(a.W == b.W);
  CHECK(a.H == b.H);
  CHECK(a.V == b.V);
  CHECK(a.pure_indices == b.pure_indices);
  CHECK_ERROR_CODE(random_separable(3, 20, 4, 0), ErrorCode::bad_rank);
}

TEST_CASE("assemble scales the noise to nu") {
  const SynthInstance inst = random_separable(8, 25, 3, 4);
  const Matrix WH = inst.W * inst.H;
  CHECK(assemble(inst, 0.0).data() == WH);
  CHECK(std::abs(matrix_l1_norm(assemble(inst, 0.5).data() - WH) - 0.5) <= 1e-12);
  CHECK_ERROR_CODE(assemble(inst, -1.0), ErrorCode::invalid_argument);
  const SynthInstance clean = random_separable(8, 25, 3, 4, 0.0);
  CHECK_ERROR_CODE(assemble(clean, 0.1), ErrorCode::zero_noise);
}

TEST_CASE("noiseless columns are conic combinations of W") {
  const SynthInstance inst = random_separable(6, 30, 3, 2, 0.0);
  const Matrix A = assemble(inst, 0.0).data();
  for (Index j = 0; j < A.cols(); ++j) CHECK(oracle::nnls_enumerate(inst.W, A.col(j)) <= 1e-12);
}

TEST_CASE("noise at rho/10 satisfies the error-bound hypothesis") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SynthInstance inst = random_separable(8, 20, 3, seed);
    const double rw = rho(inst.W);
    const double eps = matrix_l1_norm(assemble(inst, rw / 10.0).data() - inst.W * inst.H);
    CHECK(eps < rw / 9.0);
  }
}

TEST_CASE("derive_whv on exactly separable data") {
  const SynthInstance base = random_separable(6, 12, 3, 21, 0.0);
  const HsiMatrix A_real = assemble(base, 0.0);
  const SynthInstance inst = derive_whv(A_real, base.W);
  CHECK(inst.pure_indices == base.pure_indices);
  CHECK(inst.V.cwiseAbs().maxCoeff() <= 1e-7);
  CHECK((inst.H - base.H).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(audit_instance(inst).pure_exact);
}

TEST_CASE("derive_whv reports duplicate matches") {
  const SynthInstance base = random_separable(5, 10, 3, 8, 0.0);
  Matrix ident(5, 3);
  for (Index j = 0; j < 3; ++j) ident.col(j) = base.W.col(0);
  CHECK_ERROR_CODE(derive_whv(assemble(base, 0.0), ident), ErrorCode::duplicate_match);
}

TEST_CASE("derive_whv on a small noisy matrix") {
  const Matrix A_real = oracle::random_matrix(4, 10, 31, 0.05, 1.0);
  const Matrix ident = oracle::random_matrix(4, 2, 32, 0.05, 1.0);
  const SynthInstance inst = derive_whv(HsiMatrix(A_real), ident);
  const Matrix A = l1_normalize_columns(A_real);
  CHECK((A - inst.W * inst.H - inst.V).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(std::abs(inst.nu - matrix_l1_norm(inst.V)) == 0.0);
  CHECK((assemble(inst, inst.nu).data() - A).cwiseAbs().maxCoeff() <= 1e-12);
  for (Index j = 0; j < A.cols(); ++j) {
    if (std::find(inst.pure_indices.begin(), inst.pure_indices.end(), j) != inst.pure_indices.end()) continue;
    const Vector ref = oracle::simplex_ls_projected_gradient(inst.W, A.col(j));
    CHECK(std::abs(inst.V.col(j).squaredNorm() - (inst.W * ref - A.col(j)).squaredNorm()) <= 1e-6);
    CHECK(std::abs(inst.H.col(j).sum() - 1.0) <= 1e-8);
    CHECK(inst.H.col(j).minCoeff() >= -1e-10);
  }
  for (std::size_t k = 0; k < inst.pure_indices.size(); ++k) {
    CHECK(inst.H.col(inst.pure_indices[k]) == Vector::Unit(2, static_cast<Index>(k)));
  }
}
