#pragma once

#include <span>
#include <vector>

#include "odsym/matrix.hpp"

namespace odsym {

/// Minimum-cost perfect matching on a square r x r cost matrix (row-major),
/// Hungarian method with potentials, O(r^3). Returns col_of_row.
std::vector<Index> solve_assignment(std::span<const double> cost, Index r);

}  // namespace odsym
