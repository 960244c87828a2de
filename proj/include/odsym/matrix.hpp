#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "odsym/error.hpp"

namespace odsym {

using Index = std::size_t;

// Entrywise norm used for off-diagonal objectives and losses.
enum class Norm { L1 = 1, L2 = 2 };

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Symmetric nonnegative n x n matrix stored sparse.
///
/// The upper triangle is kept as a sorted coordinate list and, for column
/// access, a full compressed-row adjacency holding both mirror images of every
/// off-diagonal entry. Diagonal entries are stored even though the
/// off-diagonal objectives ignore them; the residual-free solvers need A(k,k).
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;

  /// Entries may be given in either triangle. A logical entry listed twice
  /// (as (i,j) and (j,i), or repeated) must carry the same value. Zeros are
  /// dropped. Throws PreconditionError on out-of-range indices, negative or
  /// non-finite values, or conflicting duplicates.
  static SparseSymMatrix from_triplets(Index n, std::vector<Triplet> entries);

  Index size() const { return n_; }

  /// Number of stored nonzeros counting both mirror images (K).
  Index stored_nonzeros() const { return col_.size(); }

  double operator()(Index i, Index j) const;
  double diagonal(Index k) const { return diag_[k]; }

  /// Upper-triangle entries (row <= col), sorted row-major.
  const std::vector<Triplet>& upper() const { return upper_; }

  /// Column indices / values of row i (equivalently column i), ascending.
  std::span<const Index> row_indices(Index i) const {
    return {col_.data() + row_ptr_[i], col_.data() + row_ptr_[i + 1]};
  }
  std::span<const double> row_values(Index i) const {
    return {val_.data() + row_ptr_[i], val_.data() + row_ptr_[i + 1]};
  }

  double row_sum(Index i) const;

 private:
  Index n_ = 0;
  std::vector<Triplet> upper_;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_;
  std::vector<double> val_;
  std::vector<double> diag_;
};

/// Dense nonnegative n x r factor, column-major so that a cluster column
/// H(:,l) is contiguous.
class FactorMatrix {
 public:
  FactorMatrix() = default;
  FactorMatrix(Index rows, Index cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  double& operator()(Index i, Index l) { return values_[l * rows_ + i]; }
  double operator()(Index i, Index l) const { return values_[l * rows_ + i]; }

  std::span<double> col(Index l) { return {values_.data() + l * rows_, rows_}; }
  std::span<const double> col(Index l) const {
    return {values_.data() + l * rows_, rows_};
  }

  std::span<const double> values() const { return values_; }

  /// Throws PreconditionError if any entry is negative or not finite.
  void require_nonnegative() const;

  bool operator==(const FactorMatrix&) const = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> values_;
};

/// Dense symmetric n x n matrix with signed entries (residuals). Every write
/// goes through both mirror positions.
class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;
  explicit DenseSymMatrix(Index n) : n_(n), values_(n * n, 0.0) {}

  static DenseSymMatrix from_sparse(const SparseSymMatrix& a);

  /// R = A - H H^T.
  static DenseSymMatrix residual(const SparseSymMatrix& a, const FactorMatrix& h);

  Index size() const { return n_; }
  double operator()(Index i, Index j) const { return values_[i * n_ + j]; }
  std::span<const double> row(Index i) const { return {values_.data() + i * n_, n_}; }

  void set(Index i, Index j, double v) {
    values_[i * n_ + j] = v;
    values_[j * n_ + i] = v;
  }

  /// this += alpha * h h^T
  void add_outer(std::span<const double> h, double alpha);

  /// Overwrites this with A, reusing the storage. Sizes must match.
  void assign(const SparseSymMatrix& a);

 private:
  Index n_ = 0;
  std::vector<double> values_;
};

struct FitReport {
  std::vector<double> objective_trace;  // one value per sweep
  double final_objective = 0.0;
  std::size_t sweeps = 0;
  double elapsed_seconds = 0.0;
};

/// (sum_{i != j} |A_ij - (H H^T)_ij|^p)^(1/p).
///
/// The sparse overload never forms an n x n array; it costs
/// O(K + sum_l nnz(H(:,l))^2) and adds every term individually, so an exact
/// fit evaluates to exactly zero.
double od_norm(const SparseSymMatrix& a, const FactorMatrix& h, Norm p);
double od_norm(const DenseSymMatrix& a, const FactorMatrix& h, Norm p);

/// (sum_{i != j} |R_ij|^p)^(1/p).
double od_norm(const DenseSymMatrix& r, Norm p);

/// Row-compressed nonnegative count matrix (documents x words).
class SparseCounts {
 public:
  SparseCounts() = default;
  /// Duplicated coordinates are summed. Throws PreconditionError on
  /// out-of-range indices or negative / non-finite values.
  static SparseCounts from_triplets(Index rows, Index cols, std::vector<Triplet> entries);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::span<const Index> row_indices(Index i) const {
    return {col_.data() + row_ptr_[i], col_.data() + row_ptr_[i + 1]};
  }
  std::span<const double> row_values(Index i) const {
    return {val_.data() + row_ptr_[i], val_.data() + row_ptr_[i + 1]};
  }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_;
  std::vector<double> val_;
};

/// A_ab = <x_a, x_b> / (|x_a| |x_b|), unit diagonal, entries clamped to [0,1].
/// Throws PreconditionError naming the first all-zero row.
SparseSymMatrix cosine_similarity(const SparseCounts& x);

}  // namespace odsym
