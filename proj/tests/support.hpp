#pragma once

// Shared fixtures, oracles and random generators for the unit tests.

#include <cmath>
#include <cstdint>
#include <vector>

#include "odsym/matrix.hpp"
#include "odsym/rng.hpp"

namespace odsym::testing {

// The 3x3 two-cluster matrix whose clusters overlap in the middle item.
inline SparseSymMatrix example_one() {
  return SparseSymMatrix::from_triplets(
      3, {{0, 0, 1}, {0, 1, 1}, {1, 1, 1}, {1, 2, 1}, {2, 2, 1}});
}

// Its exact off-diagonal factorization [[1,0],[1,1],[0,1]].
inline FactorMatrix example_one_factor() {
  FactorMatrix h(3, 2);
  h(0, 0) = 1;
  h(1, 0) = 1;
  h(1, 1) = 1;
  h(2, 1) = 1;
  return h;
}

inline FactorMatrix factor_from_rows(const std::vector<std::vector<double>>& rows) {
  FactorMatrix h(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (Index i = 0; i < h.rows(); ++i) {
    for (Index l = 0; l < h.cols(); ++l) h(i, l) = rows[i][l];
  }
  return h;
}

// Symmetric matrix whose upper-triangle entries are nonzero with probability
// `density`; values are 1 when `binary`, else uniform in (0, 2].
inline SparseSymMatrix random_sym(Index n, double density, Rng& rng, bool binary = false) {
  std::vector<Triplet> e;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      if (uniform01(rng) < density) {
        e.push_back({i, j, binary ? 1.0 : 2.0 - 2.0 * uniform01(rng)});
      }
    }
  }
  return SparseSymMatrix::from_triplets(n, std::move(e));
}

// Nonnegative factor, each entry zero with probability `zeros`.
inline FactorMatrix random_factor(Index n, Index r, Rng& rng, double zeros = 0.0) {
  FactorMatrix h(n, r);
  for (Index l = 0; l < r; ++l) {
    for (Index i = 0; i < n; ++i) h(i, l) = uniform01(rng) < zeros ? 0.0 : uniform01(rng);
  }
  return h;
}

// Naive O(n^2 r) double loop over i != j.
inline double od_norm_naive(const SparseSymMatrix& a, const FactorMatrix& h, int p) {
  double total = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = 0; j < a.size(); ++j) {
      if (i == j) continue;
      double g = 0.0;
      for (Index l = 0; l < h.cols(); ++l) g += h(i, l) * h(j, l);
      const double d = std::abs(a(i, j) - g);
      total += p == 1 ? d : d * d;
    }
  }
  return p == 1 ? total : std::sqrt(total);
}

// sum_{i != j} |P_ij - h_i h_j|^p for a dense rank-one residual problem.
inline double rank_one_loss(const DenseSymMatrix& p, const std::vector<double>& h, int pw) {
  double total = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    for (Index j = 0; j < p.size(); ++j) {
      if (i == j) continue;
      const double d = std::abs(p(i, j) - h[i] * h[j]);
      total += pw == 1 ? d : d * d;
    }
  }
  return total;
}

// Random dense symmetric matrix with entries in [-1, 2).
inline DenseSymMatrix random_dense_sym(Index n, Rng& rng) {
  DenseSymMatrix p(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) p.set(i, j, 3.0 * uniform01(rng) - 1.0);
  }
  return p;
}

inline double max_abs_diff(const FactorMatrix& x, const FactorMatrix& y) {
  double m = 0.0;
  for (Index k = 0; k < x.values().size(); ++k) {
    m = std::max(m, std::abs(x.values()[k] - y.values()[k]));
  }
  return m;
}

}  // namespace odsym::testing
