#pragma once

#include <span>
#include <vector>

#include "odsym/matrix.hpp"

namespace odsym {

// Rank-one objectives on binary inputs. L0 counts off-diagonal mismatches
// (exact comparison, no tolerance).
enum class RankOneNorm { L0, L1 };

/// sum_{i != j} of |A_ij - h_i h_j| (L1) or [A_ij != h_i h_j] (L0).
double rank_one_objective(const SparseSymMatrix& a, std::span<const double> h, RankOneNorm norm);

/// Support indicator: 0 where h_i == 0, 1 elsewhere. For binary A this never
/// increases the L0 objective.
std::vector<double> binarize_l0(std::span<const double> h);

/// Rounds each fractional entry of h in [0,1]^n, in index order, to whichever
/// of {0, 1} gives the lower partial objective sum_{j != i} |A_ij - h_i h_j|
/// (0 on ties). For binary A the L1 objective never increases. Throws
/// PreconditionError if h leaves [0,1] or the sizes differ.
std::vector<double> binarize_l1(std::span<const double> h, const SparseSymMatrix& a);

struct RankOneSolution {
  std::vector<double> h;  // binary
  double objective = 0.0;
};

/// Exhaustive search over h in {0,1}^n, n <= 22. Ties keep the first vector
/// in enumeration order (bit i of the counter is h_i).
RankOneSolution rank_one_bruteforce(const SparseSymMatrix& a, RankOneNorm norm);

/// One column per nonzero off-diagonal pair A_pq (p < q): H(p,l) = 1,
/// H(q,l) = A_pq. Reconstructs every off-diagonal entry exactly.
FactorMatrix exact_factorization(const SparseSymMatrix& a);

}  // namespace odsym
