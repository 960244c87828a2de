#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "odsym/matrix.hpp"
#include "odsym/wmedian.hpp"

namespace odsym {

enum class SolverPath {
  Residual,      // dense residual R = A - HH^T, O(n^2) memory
  ResidualFree,  // caches only, O(K + nr) memory
};

struct SolverConfig {
  Norm loss = Norm::L2;
  Index rank = 1;
  std::size_t max_sweeps = 500;
  // Stop once (obj_{s-1} - obj_s) / max(obj_0, tiny) < tol.
  double tol = 1e-6;
  SolverPath path = SolverPath::ResidualFree;
  std::uint64_t seed = 0;
  // Largest n the residual path accepts.
  Index dense_cap = 5000;

  void validate() const;
};

struct FitResult {
  FactorMatrix factor;
  FitReport report;
};

/// Running quantities of the residual-free l2 sweep: C_l = |H(:,l)|^2,
/// L_k = |H(k,:)|^2 and the Gram matrix D = H^T H (row-major r x r).
struct L2Caches {
  std::vector<double> col_norms;
  std::vector<double> row_norms;
  std::vector<double> gram;

  static L2Caches compute(const FactorMatrix& h);
  double gram_at(Index l, Index t) const { return gram[l * col_norms.size() + t]; }
  double gram_sq() const;  // |H^T H|_F^2
};

/// The l2 OD-norm through the expansion
///   |A|_OD^2 - 2 <A, HH^T>_OD + |H^T H|_F^2 - sum_i |H(i,:)|^4,
/// which costs O(K r) given the caches instead of the O(sum_l nnz_l^2) of the
/// exact evaluation. Cancellation limits absolute accuracy to about
/// sqrt(eps) * |A|_OD, so use it for monitoring, not for certifying zeros.
double od_norm_l2_expanded(const SparseSymMatrix& a, const FactorMatrix& h,
                           const L2Caches& caches);

/// Single-coordinate l2 subproblem: with the other entries fixed,
/// sum_{i != j} (P_ij - h_i h_j)^2 = 2 a h_k^2 - 4 b h_k + const, so
/// a h_k - b is a quarter of the partial derivative in h_k.
struct L2Coefficients {
  double a = 0.0;
  double b = 0.0;
};

/// a = |h|^2 - h_k^2 and b = h^T P(:,k) - h_k P_kk.
L2Coefficients l2_coefficients(const DenseSymMatrix& p, std::span<const double> h, Index k);

/// Exact minimizer over h_k >= 0 of sum_{i != j} (P_ij - h_i h_j)^2 with the
/// other entries of h fixed: max(0, b_k / a_k) where a_k = |h|^2 - h_k^2 and
/// b_k = h^T P(:,k) - h_k P_kk. Returns 0 when a_k vanishes.
double l2_coordinate_update(const DenseSymMatrix& p, std::span<const double> h, Index k);

/// One cyclic pass k = 1..n of exact l1 updates on the rank-one problem
/// min_h sum_{i != j} |P_ij - h_i h_j|; returns the updated vector.
std::vector<double> l1_rank_one(const DenseSymMatrix& p, std::span<const double> h0);

/// Residual-free l2 coordinate descent; caches C, L, D are updated
/// incrementally after every scalar change. Sweeps run l outer, k inner.
/// objective() is exact unless that would cost far more than a sweep, in
/// which case it falls back to od_norm_l2_expanded.
class L2Solver {
 public:
  L2Solver(const SparseSymMatrix& a, FactorMatrix h0);
  void sweep();
  double objective() const;
  const FactorMatrix& factor() const { return h_; }
  FactorMatrix take_factor() { return std::move(h_); }
  const L2Caches& caches() const { return caches_; }
  /// Coefficients of the (k, l) subproblem from A and the caches alone.
  L2Coefficients coefficients(Index k, Index l) const;

 private:
  const SparseSymMatrix& a_;
  FactorMatrix h_;
  L2Caches caches_;
  double a_offdiag2_ = 0.0;  // |A|_OD^2
};

/// Residual-free l1 coordinate descent. The residual entries needed by each
/// weighted-median subproblem are rebuilt from A and the rows of H; only rows
/// with H(i,l) != 0 carry weight, so only those are formed.
class L1Solver {
 public:
  L1Solver(const SparseSymMatrix& a, FactorMatrix h0);
  void sweep();
  double objective() const;
  const FactorMatrix& factor() const { return h_; }
  FactorMatrix take_factor() { return std::move(h_); }

 private:
  const SparseSymMatrix& a_;
  FactorMatrix h_;
  MedianWorkspace ws_;
  std::vector<double> a_col_;  // scatter of A(:,k)
  std::vector<Index> support_;  // sorted nonzero rows of the current column
  std::vector<double> weights_;
  std::vector<double> targets_;
};

/// Coordinate descent through an explicit dense residual: for every column
/// P = R + h h^T, h is updated on the rank-one problem, R = P - h h^T.
/// The l1 variant instead rebuilds P = A - sum_{t != l} H(:,t) H(:,t)^T for
/// each column, O(n^2 r) per column: adding h h^T back onto a rounded R
/// leaves O(eps) noise where P is exactly zero, and the weighted median
/// turns that noise into spurious nonzero entries.
class ResidualSolver {
 public:
  ResidualSolver(const SparseSymMatrix& a, FactorMatrix h0, Norm loss);
  void sweep();
  double objective() const;
  const FactorMatrix& factor() const { return h_; }
  FactorMatrix take_factor() { return std::move(h_); }
  const DenseSymMatrix& residual() const { return r_; }

 private:
  const SparseSymMatrix& a_;
  FactorMatrix h_;
  DenseSymMatrix r_;
  Norm loss_;
  MedianWorkspace ws_;
};

FitResult fit_l2(const SparseSymMatrix& a, FactorMatrix h0, const SolverConfig& cfg);
FitResult fit_l2_residual(const SparseSymMatrix& a, FactorMatrix h0, const SolverConfig& cfg);
FitResult fit_l1(const SparseSymMatrix& a, FactorMatrix h0, const SolverConfig& cfg);
FitResult fit_l1_residual(const SparseSymMatrix& a, FactorMatrix h0, const SolverConfig& cfg);

/// Dispatches on cfg.loss and cfg.path.
FitResult fit(const SparseSymMatrix& a, FactorMatrix h0, const SolverConfig& cfg);

}  // namespace odsym
