#include <doctest.h>

#include <numeric>

#include "check_error.hpp"
#include "conered/assignment.hpp"
#include "oracles.hpp"

using namespace conered;

TEST_CASE("zero cost gives the identity") {
  const std::vector<Index> sigma = solve_assignment(Matrix::Zero(4, 4));
  CHECK(sigma == std::vector<Index>{0, 1, 2, 3});
}

TEST_CASE("unique minima forming a permutation are returned") {
  const std::vector<Index> perm{2, 0, 3, 1};
  Matrix cost = Matrix::Ones(4, 4);
  for (Index j = 0; j < 4; ++j) cost(perm[static_cast<std::size_t>(j)], j) = 0.0;
  CHECK(solve_assignment(cost) == perm);
}

TEST_CASE("assignment matches brute force including ties") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Index r = 1 + static_cast<Index>(seed % 6);
    Matrix cost = oracle::random_matrix(r, r, seed);
    if (seed % 3 == 0) cost = cost.array().round();  // many ties
    const oracle::BruteAssignment brute = oracle::brute_force_assignment(cost);
    const std::vector<Index> sigma = solve_assignment(cost);
    CHECK(std::abs(assignment_cost(cost, sigma) - brute.cost) <= 1e-12);
    CHECK(sigma == brute.sigma);
  }
}

TEST_CASE("hungarian handles rectangular costs") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Matrix cost = oracle::random_matrix(3, 6, seed);
    const std::vector<Index> cols = hungarian(cost);
    double best = 1e300;
    std::vector<Index> all(6);
    std::iota(all.begin(), all.end(), Index{0});
    do {
      best = std::min(best, cost(0, all[0]) + cost(1, all[1]) + cost(2, all[2]));
    } while (std::next_permutation(all.begin(), all.end()));
    CHECK(cost(0, cols[0]) + cost(1, cols[1]) + cost(2, cols[2]) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("assignment validates shape") {
  CHECK_ERROR_CODE(solve_assignment(Matrix::Zero(2, 3)), ErrorCode::dimension_mismatch);
  CHECK_ERROR_CODE(hungarian(Matrix::Zero(3, 2)), ErrorCode::dimension_mismatch);
}
