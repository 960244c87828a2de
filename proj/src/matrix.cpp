#include "odsym/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace odsym {

namespace {

void check_value(double v, Index i, Index j) {
  if (!std::isfinite(v) || v < 0.0) {
    throw PreconditionError("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                            ") must be finite and nonnegative, got " + std::to_string(v));
  }
}

double power(double x, Norm p) { return p == Norm::L1 ? std::abs(x) : x * x; }

double root(double s, Norm p) { return p == Norm::L1 ? s : std::sqrt(s); }

void require_norm(Norm p) {
  if (p != Norm::L1 && p != Norm::L2) throw PreconditionError("norm must be L1 or L2");
}

}  // namespace

SparseSymMatrix SparseSymMatrix::from_triplets(Index n, std::vector<Triplet> entries) {
  for (auto& t : entries) {
    if (t.row >= n || t.col >= n) {
      throw PreconditionError("entry (" + std::to_string(t.row + 1) + "," +
                              std::to_string(t.col + 1) + ") outside " + std::to_string(n) +
                              "x" + std::to_string(n) + " matrix");
    }
    check_value(t.value, t.row, t.col);
    if (t.row > t.col) std::swap(t.row, t.col);
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& x, const Triplet& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });

  SparseSymMatrix m;
  m.n_ = n;
  m.diag_.assign(n, 0.0);
  for (const auto& t : entries) {
    if (!m.upper_.empty() && m.upper_.back().row == t.row && m.upper_.back().col == t.col) {
      if (m.upper_.back().value != t.value) {
        throw PreconditionError("asymmetric or conflicting entry at (" +
                                std::to_string(t.row + 1) + "," + std::to_string(t.col + 1) +
                                ")");
      }
      continue;
    }
    m.upper_.push_back(t);
  }
  std::erase_if(m.upper_, [](const Triplet& t) { return t.value == 0.0; });

  std::vector<Index> degree(n, 0);
  for (const auto& t : m.upper_) {
    ++degree[t.row];
    if (t.row != t.col) ++degree[t.col];
    else m.diag_[t.row] = t.value;
  }
  m.row_ptr_.assign(n + 1, 0);
  for (Index i = 0; i < n; ++i) m.row_ptr_[i + 1] = m.row_ptr_[i] + degree[i];
  m.col_.resize(m.row_ptr_[n]);
  m.val_.resize(m.row_ptr_[n]);
  // Row-major traversal of the upper list reaches every mirror (row, c) with
  // row < c before row c's own entries, so each adjacency row comes out sorted.
  std::vector<Index> fill(m.row_ptr_.begin(), m.row_ptr_.end() - 1);
  for (const auto& t : m.upper_) {
    if (t.row != t.col) {
      m.col_[fill[t.col]] = t.row;
      m.val_[fill[t.col]++] = t.value;
    }
    m.col_[fill[t.row]] = t.col;
    m.val_[fill[t.row]++] = t.value;
  }
  return m;
}

double SparseSymMatrix::operator()(Index i, Index j) const {
  if (i == j) return diag_[i];
  auto idx = row_indices(i);
  auto it = std::lower_bound(idx.begin(), idx.end(), j);
  if (it == idx.end() || *it != j) return 0.0;
  return row_values(i)[static_cast<std::size_t>(it - idx.begin())];
}

double SparseSymMatrix::row_sum(Index i) const {
  double s = 0.0;
  for (double v : row_values(i)) s += v;
  return s;
}

void FactorMatrix::require_nonnegative() const {
  for (Index l = 0; l < cols_; ++l) {
    for (Index i = 0; i < rows_; ++i) {
      double v = (*this)(i, l);
      if (!std::isfinite(v) || v < 0.0) {
        throw PreconditionError("factor entry (" + std::to_string(i + 1) + "," +
                                std::to_string(l + 1) + ") must be finite and nonnegative");
      }
    }
  }
}

DenseSymMatrix DenseSymMatrix::from_sparse(const SparseSymMatrix& a) {
  DenseSymMatrix d(a.size());
  for (const auto& t : a.upper()) d.set(t.row, t.col, t.value);
  return d;
}

DenseSymMatrix DenseSymMatrix::residual(const SparseSymMatrix& a, const FactorMatrix& h) {
  if (a.size() != h.rows()) throw PreconditionError("dimension mismatch between A and H");
  DenseSymMatrix r = from_sparse(a);
  for (Index l = 0; l < h.cols(); ++l) r.add_outer(h.col(l), -1.0);
  return r;
}

void DenseSymMatrix::add_outer(std::span<const double> h, double alpha) {
  for (Index i = 0; i < n_; ++i) {
    const double hi = alpha * h[i];
    if (hi == 0.0) continue;
    double* row = values_.data() + i * n_;
    for (Index j = 0; j < n_; ++j) row[j] += hi * h[j];
  }
}

void DenseSymMatrix::assign(const SparseSymMatrix& a) {
  if (a.size() != n_) throw PreconditionError("dimension mismatch in dense assignment");
  std::fill(values_.begin(), values_.end(), 0.0);
  for (const auto& t : a.upper()) set(t.row, t.col, t.value);
}

double od_norm(const SparseSymMatrix& a, const FactorMatrix& h, Norm p) {
  require_norm(p);
  const Index n = a.size();
  if (n != h.rows()) throw PreconditionError("dimension mismatch between A and H");
  const Index r = h.cols();

  std::vector<std::vector<Index>> support(r);
  for (Index l = 0; l < r; ++l) {
    auto c = h.col(l);
    for (Index i = 0; i < n; ++i) {
      if (c[i] != 0.0) support[l].push_back(i);
    }
  }

  // Row i of H H^T is scattered into g over the union of the supports of the
  // columns row i participates in.
  std::vector<double> g(n, 0.0);
  std::vector<Index> stamp(n, n);
  std::vector<Index> touched;
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    touched.clear();
    for (Index l = 0; l < r; ++l) {
      const double hil = h(i, l);
      if (hil == 0.0) continue;
      auto c = h.col(l);
      for (Index j : support[l]) {
        if (stamp[j] != i) {
          stamp[j] = i;
          touched.push_back(j);
        }
        g[j] += hil * c[j];
      }
    }
    auto idx = a.row_indices(i);
    auto val = a.row_values(i);
    for (std::size_t e = 0; e < idx.size(); ++e) {
      const Index j = idx[e];
      if (j == i) continue;
      total += power(val[e] - g[j], p);
      g[j] = 0.0;
    }
    for (Index j : touched) {
      if (j != i) total += power(g[j], p);
      g[j] = 0.0;
    }
  }
  return root(total, p);
}

double od_norm(const DenseSymMatrix& a, const FactorMatrix& h, Norm p) {
  require_norm(p);
  const Index n = a.size();
  if (n != h.rows()) throw PreconditionError("dimension mismatch between A and H");
  double total = 0.0;
  std::vector<double> hi(h.cols());
  for (Index i = 0; i < n; ++i) {
    for (Index l = 0; l < h.cols(); ++l) hi[l] = h(i, l);
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      double g = 0.0;
      for (Index l = 0; l < h.cols(); ++l) g += hi[l] * h(j, l);
      total += power(a(i, j) - g, p);
    }
  }
  return root(total, p);
}

double od_norm(const DenseSymMatrix& r, Norm p) {
  require_norm(p);
  double total = 0.0;
  for (Index i = 0; i < r.size(); ++i) {
    auto row = r.row(i);
    for (Index j = 0; j < r.size(); ++j) {
      if (j != i) total += power(row[j], p);
    }
  }
  return root(total, p);
}

SparseCounts SparseCounts::from_triplets(Index rows, Index cols, std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row >= rows || t.col >= cols) {
      throw PreconditionError("count entry (" + std::to_string(t.row + 1) + "," +
                              std::to_string(t.col + 1) + ") out of range");
    }
    check_value(t.value, t.row, t.col);
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& x, const Triplet& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  SparseCounts x;
  x.rows_ = rows;
  x.cols_ = cols;
  x.row_ptr_.assign(rows + 1, 0);
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto& t = entries[e];
    if (e > 0 && entries[e - 1].row == t.row && entries[e - 1].col == t.col) {
      x.val_.back() += t.value;
      continue;
    }
    x.col_.push_back(t.col);
    x.val_.push_back(t.value);
    ++x.row_ptr_[t.row + 1];
  }
  for (Index i = 0; i < rows; ++i) x.row_ptr_[i + 1] += x.row_ptr_[i];
  return x;
}

SparseSymMatrix cosine_similarity(const SparseCounts& x) {
  const Index n = x.rows();
  std::vector<double> norms(n, 0.0);
  for (Index a = 0; a < n; ++a) {
    double s = 0.0;
    for (double v : x.row_values(a)) s += v * v;
    if (s == 0.0) {
      throw PreconditionError("row " + std::to_string(a + 1) + " of the count matrix is all zero");
    }
    norms[a] = std::sqrt(s);
  }

  // Inverted index: for every word, the documents containing it.
  std::vector<std::vector<std::pair<Index, double>>> postings(x.cols());
  for (Index a = 0; a < n; ++a) {
    auto idx = x.row_indices(a);
    auto val = x.row_values(a);
    for (std::size_t e = 0; e < idx.size(); ++e) {
      if (val[e] != 0.0) postings[idx[e]].emplace_back(a, val[e] / norms[a]);
    }
  }

  std::vector<Triplet> entries;
  std::vector<double> acc(n, 0.0);
  std::vector<Index> touched;
  for (Index a = 0; a < n; ++a) {
    touched.clear();
    auto idx = x.row_indices(a);
    auto val = x.row_values(a);
    for (std::size_t e = 0; e < idx.size(); ++e) {
      if (val[e] == 0.0) continue;
      const double xa = val[e] / norms[a];
      for (const auto& [b, xb] : postings[idx[e]]) {
        if (b <= a) continue;
        if (acc[b] == 0.0) touched.push_back(b);
        acc[b] += xa * xb;
      }
    }
    entries.push_back({a, a, 1.0});
    std::sort(touched.begin(), touched.end());
    for (Index b : touched) {
      entries.push_back({a, b, std::clamp(acc[b], 0.0, 1.0)});
      acc[b] = 0.0;
    }
  }
  return SparseSymMatrix::from_triplets(n, std::move(entries));
}

}  // namespace odsym
