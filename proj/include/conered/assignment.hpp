#pragma once

#include <vector>

#include "conered/core.hpp"

namespace conered {

/// Minimum-cost matching of every row of `cost` (rows <= cols) to a distinct
/// column. Returns the column chosen for each row. Hungarian method with
/// potentials, O(rows^2 cols).
std::vector<Index> hungarian(const Matrix& cost);

/// Square assignment: sigma[j] is the row matched to column j, minimizing
/// sum_j cost(sigma[j], j). Among optimal permutations (to a relative
/// tolerance of 1e-12) the lexicographically smallest sigma is returned.
std::vector<Index> solve_assignment(const Matrix& cost);

/// sum_j cost(sigma[j], j)
double assignment_cost(const Matrix& cost, const std::vector<Index>& sigma);

}  // namespace conered
