#pragma once

#include <cstdint>
#include <optional>

#include "odsym/matrix.hpp"

namespace odsym {

enum class InitKind { Zero, Random, Greedy };

FactorMatrix init_zero(Index n, Index r);

/// i.i.d. uniform [0,1) entries drawn from `seed`.
FactorMatrix init_random(Index n, Index r, std::uint64_t seed);

struct GreedyOptions {
  /// Score vector s = A w - H (H^T w) is recomputed while the inner counter
  /// i (1-based) is below this bound; afterwards it is only masked. Defaults
  /// to 2r. A value > n recomputes at every step.
  std::optional<Index> score_refreshes;
};

/// Column-by-column greedy construction.
///
/// For each column j a weighting vector w starts at all ones. At every inner
/// step the row maximizing the (possibly stale) score among unselected rows
/// is picked, ties going to the lowest index. The first pick gets H(k,j) = 1
/// and w = A(:,k); later picks get the closed-form optimum given the rows
/// already in the column (b / C_j clipped at zero for L2, a constrained
/// weighted median for L1) and w += A(:,k). The residual A - HH^T is never
/// formed, so memory stays O(K + nr).
///
/// Throws PreconditionError when r > n or r == 0.
FactorMatrix init_greedy(const SparseSymMatrix& a, Index r, Norm loss, GreedyOptions opts = {});

FactorMatrix initialize(const SparseSymMatrix& a, Index r, InitKind kind, Norm loss,
                        std::uint64_t seed);

}  // namespace odsym
