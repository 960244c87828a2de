#include "odsym/assignment.hpp"

#include <algorithm>
#include <limits>

namespace odsym {

std::vector<Index> solve_assignment(std::span<const double> cost, Index r) {
  if (cost.size() != r * r) throw PreconditionError("assignment: cost must be r x r");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based shortest augmenting path formulation; column 0 is a sentinel.
  std::vector<double> u(r + 1, 0.0), v(r + 1, 0.0), minv(r + 1);
  std::vector<Index> row_of(r + 1, 0), way(r + 1, 0);
  std::vector<char> used(r + 1);
  for (Index i = 1; i <= r; ++i) {
    row_of[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Index i0 = row_of[j0];
      double delta = kInf;
      Index j1 = 0;
      for (Index j = 1; j <= r; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * r + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= r; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const Index j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> col_of(r);
  for (Index j = 1; j <= r; ++j) col_of[row_of[j] - 1] = j - 1;
  return col_of;
}

}  // namespace odsym
