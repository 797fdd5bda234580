#include <doctest.h>

#include "conered/nnls.hpp"
#include "oracles.hpp"

using namespace conered;

TEST_CASE("nnls clamps negative coordinates for the identity") {
  const Vector y = Eigen::Vector3d(1, -2, 3);
  const NnlsResult r = nnls_solve(Matrix::Identity(3, 3), y);
  CHECK(r.x.isApprox(Eigen::Vector3d(1, 0, 3)));
  CHECK(r.residual_norm == doctest::Approx(2.0));
}

TEST_CASE("nnls recovers exact nonnegative combinations") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix B = oracle::random_matrix(6, 4, seed);
    const Vector x0 = oracle::random_matrix(4, 1, seed + 100).col(0);
    CHECK(nnls_solve(B, B * x0).residual_norm <= 1e-10);
  }
}

TEST_CASE("nnls on the 2x2 example matches enumeration") {
  Matrix B(2, 2);
  B << 1, 1, 0, 1;
  const Vector y = Eigen::Vector2d(0, 1);
  const NnlsResult r = nnls_solve(B, y);
  CHECK(r.residual_norm == doctest::Approx(oracle::nnls_enumerate(B, y)).epsilon(1e-12));
  // The optimum is x = (0, 1/2) with residual 1/sqrt(2).
  CHECK(r.x(0) == doctest::Approx(0.0));
  CHECK(r.x(1) == doctest::Approx(0.5));
}

TEST_CASE("nnls KKT conditions and nonnegativity on random instances") {
  const double tol = 1e-10;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Index d = 1 + static_cast<Index>(seed % 5);
    const Index m = 1 + static_cast<Index>((seed / 5) % 5);
    const Matrix B = oracle::random_matrix(d, m, seed, -1.0, 1.0);
    const Vector y = oracle::random_matrix(d, 1, seed + 7, -1.0, 1.0).col(0);
    const NnlsResult r = nnls_solve(B, y, tol);
    const Vector g = B.transpose() * (B * r.x - y);
    CHECK(r.x.minCoeff() >= -1e-15);
    CHECK(g.minCoeff() >= -tol);
    CHECK(std::abs(r.x.dot(g)) <= tol * (1.0 + y.squaredNorm()));
    CHECK(std::abs(r.residual_norm - oracle::nnls_enumerate(B, y)) <= 1e-9);
  }
}

TEST_CASE("cone membership examples") {
  Matrix B = oracle::random_matrix(4, 3, 3);
  const Vector a = 0.3 * B.col(0) + 0.7 * B.col(1);
  CHECK(cone_membership(B, a, 1e-8).inside);

  const Matrix e1 = Eigen::Vector3d(1, 0, 0);
  CHECK_FALSE(cone_membership(e1, Eigen::Vector3d(0, 1, 0), 1e-8).inside);
  CHECK(cone_membership(e1, Eigen::Vector3d(0, 1, 0), 1e-8).nnls.residual_norm == doctest::Approx(1.0));
  CHECK(cone_membership(e1, Eigen::Vector3d(1, 1e-9, 0), 1e-8).inside);
}

TEST_CASE("cone membership is monotone in the generator set") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Matrix B = oracle::random_matrix(4, 6, seed);
    const Vector w = oracle::random_matrix(3, 1, seed + 1).col(0);
    const Vector a = B.leftCols(3) * w;
    CHECK(cone_membership(B.leftCols(3), a, 1e-8).inside);
    for (Index extra = 4; extra <= 6; ++extra) CHECK(cone_membership(B.leftCols(extra), a, 1e-8).inside);
  }
}
