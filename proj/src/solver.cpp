#include "odsym/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace odsym {

namespace {

// a_{k,l} below this fraction of |H(:,l)|^2 is rounding noise from
// C_l - H_kl^2: the column is zero outside row k.
constexpr double kDegenerateCurvature = 1e-12;

constexpr double kExactObjectiveFactor = 16.0;
constexpr double kExpansionFloor = 1e-8;

double l2_update(double a, double b, double scale) {
  if (!(a > kDegenerateCurvature * scale)) return 0.0;
  return std::max(0.0, b / a);
}

void check_inputs(const SparseSymMatrix& a, const FactorMatrix& h0, const SolverConfig& cfg) {
  cfg.validate();
  if (a.size() != h0.rows()) {
    throw PreconditionError("dimension mismatch: A is " + std::to_string(a.size()) + "x" +
                            std::to_string(a.size()) + ", H0 has " +
                            std::to_string(h0.rows()) + " rows");
  }
  if (h0.cols() != cfg.rank) {
    throw PreconditionError("H0 has " + std::to_string(h0.cols()) + " columns, rank is " +
                            std::to_string(cfg.rank));
  }
  h0.require_nonnegative();
}

template <typename Solver>
FitResult drive(Solver& solver, const SolverConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  FitReport report;
  const double initial = solver.objective();
  const double scale = std::max(initial, std::numeric_limits<double>::min());
  double previous = initial;
  for (std::size_t s = 0; s < cfg.max_sweeps; ++s) {
    solver.sweep();
    const double current = solver.objective();
    report.objective_trace.push_back(current);
    if ((previous - current) / scale < cfg.tol) break;
    previous = current;
  }
  report.sweeps = report.objective_trace.size();
  report.final_objective = report.objective_trace.back();
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {solver.take_factor(), std::move(report)};
}

void l1_pass(const DenseSymMatrix& p, std::span<double> h, MedianWorkspace& ws,
             std::vector<double>& weights, std::vector<double>& targets) {
  const Index n = p.size();
  for (Index k = 0; k < n; ++k) {
    weights.clear();
    targets.clear();
    auto row = p.row(k);
    for (Index i = 0; i < n; ++i) {
      if (i == k || h[i] == 0.0) continue;
      weights.push_back(h[i]);
      targets.push_back(row[i]);
    }
    h[k] = constrained_weighted_median(weights, targets, ws);
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (rank < 1) throw PreconditionError("rank must be at least 1");
  if (max_sweeps < 1) throw PreconditionError("max_sweeps must be at least 1");
  if (!(tol >= 0.0)) throw PreconditionError("tol must be nonnegative");
  if (loss != Norm::L1 && loss != Norm::L2) throw PreconditionError("loss must be l1 or l2");
}

L2Caches L2Caches::compute(const FactorMatrix& h) {
  const Index n = h.rows(), r = h.cols();
  L2Caches c;
  c.col_norms.assign(r, 0.0);
  c.row_norms.assign(n, 0.0);
  c.gram.assign(r * r, 0.0);
  for (Index l = 0; l < r; ++l) {
    auto hl = h.col(l);
    for (Index t = l; t < r; ++t) {
      auto ht = h.col(t);
      double s = 0.0;
      for (Index i = 0; i < n; ++i) s += hl[i] * ht[i];
      c.gram[l * r + t] = s;
      c.gram[t * r + l] = s;
    }
    c.col_norms[l] = c.gram[l * r + l];
    for (Index i = 0; i < n; ++i) c.row_norms[i] += hl[i] * hl[i];
  }
  return c;
}

double L2Caches::gram_sq() const {
  double s = 0.0;
  for (double d : gram) s += d * d;
  return s;
}

double od_norm_l2_expanded(const SparseSymMatrix& a, const FactorMatrix& h,
                           const L2Caches& caches) {
  const Index n = a.size(), r = h.cols();
  if (h.rows() != n || caches.col_norms.size() != r || caches.row_norms.size() != n) {
    throw PreconditionError("od_norm_l2_expanded: dimension mismatch");
  }
  double a2 = 0.0, cross = 0.0;
  std::vector<double> hi(r);
  for (Index i = 0; i < n; ++i) {
    for (Index t = 0; t < r; ++t) hi[t] = h(i, t);
    auto idx = a.row_indices(i);
    auto val = a.row_values(i);
    for (std::size_t e = 0; e < idx.size(); ++e) {
      const Index j = idx[e];
      if (j == i) continue;
      double g = 0.0;
      for (Index t = 0; t < r; ++t) g += hi[t] * h(j, t);
      a2 += val[e] * val[e];
      cross += val[e] * g;
    }
  }
  double hh = caches.gram_sq();
  for (double l : caches.row_norms) hh -= l * l;
  return std::sqrt(std::max(0.0, a2 - 2.0 * cross + hh));
}

L2Coefficients l2_coefficients(const DenseSymMatrix& p, std::span<const double> h, Index k) {
  const Index n = p.size();
  if (h.size() != n || k >= n) throw PreconditionError("l2_coefficients: bad dimensions");
  double norm2 = 0.0, htp = 0.0;
  auto row = p.row(k);
  for (Index i = 0; i < n; ++i) {
    norm2 += h[i] * h[i];
    htp += h[i] * row[i];
  }
  return {norm2 - h[k] * h[k], htp - h[k] * row[k]};
}

double l2_coordinate_update(const DenseSymMatrix& p, std::span<const double> h, Index k) {
  const auto [a, b] = l2_coefficients(p, h, k);
  // a + h_k^2 is |h|^2, the scale against which a is judged degenerate.
  return l2_update(a, b, a + h[k] * h[k]);
}

std::vector<double> l1_rank_one(const DenseSymMatrix& p, std::span<const double> h0) {
  if (h0.size() != p.size()) throw PreconditionError("l1_rank_one: dimension mismatch");
  std::vector<double> h(h0.begin(), h0.end());
  MedianWorkspace ws;
  std::vector<double> weights, targets;
  l1_pass(p, h, ws, weights, targets);
  return h;
}

// ---------------------------------------------------------------------------

L2Solver::L2Solver(const SparseSymMatrix& a, FactorMatrix h0)
    : a_(a), h_(std::move(h0)), caches_(L2Caches::compute(h_)) {
  for (const auto& t : a_.upper()) {
    if (t.row != t.col) a_offdiag2_ += 2.0 * t.value * t.value;
  }
}

L2Coefficients L2Solver::coefficients(Index k, Index l) const {
  const Index r = h_.cols();
  const auto& D = caches_.gram;
  auto hl = h_.col(l);
  double hta = 0.0;
  auto idx = a_.row_indices(k);
  auto val = a_.row_values(k);
  for (std::size_t e = 0; e < idx.size(); ++e) hta += hl[idx[e]] * val[e];
  double hd = 0.0;
  for (Index t = 0; t < r; ++t) hd += h_(k, t) * D[t * r + l];
  const double old = hl[k];
  const double cl = caches_.col_norms[l];
  return {cl - old * old,
          hta - hd + old * (cl + caches_.row_norms[k] - a_.diagonal(k) - old * old)};
}

void L2Solver::sweep() {
  const Index n = h_.rows(), r = h_.cols();
  // Incremental updates drift; a fresh start per sweep costs O(nr^2), below
  // the sweep itself.
  caches_ = L2Caches::compute(h_);
  auto& C = caches_.col_norms;
  auto& L = caches_.row_norms;
  auto& D = caches_.gram;
  for (Index l = 0; l < r; ++l) {
    auto hl = h_.col(l);
    // Exact nonzero count of the column: C(l) - h_k^2 keeps rounding residue
    // after the other entries are zeroed, which the count overrides.
    auto nnz = static_cast<Index>(std::count_if(hl.begin(), hl.end(), [](double v) {
      return v != 0.0;
    }));
    for (Index k = 0; k < n; ++k) {
      const double old = hl[k];
      const bool alone = nnz == static_cast<Index>(old != 0.0);
      const auto [a, b] = coefficients(k, l);
      const double next = alone ? 0.0 : l2_update(a, b, C[l]);
      if (next == old) continue;

      nnz += static_cast<Index>(next != 0.0) - static_cast<Index>(old != 0.0);
      hl[k] = next;
      const double delta2 = next * next - old * old;
      C[l] += delta2;
      L[k] += delta2;
      const double delta = next - old;
      for (Index t = 0; t < r; ++t) {
        if (t == l) continue;
        D[l * r + t] += h_(k, t) * delta;
        D[t * r + l] = D[l * r + t];
      }
      D[l * r + l] += delta2;
    }
  }
}

double L2Solver::objective() const {
  // Exact evaluation whenever it costs about as much as a sweep, O(Kr + nr^2);
  // otherwise the cache expansion, unless it is too close to its own rounding
  // floor to be trusted.
  const Index n = h_.rows(), r = h_.cols();
  double pairs = 0.0;
  for (Index l = 0; l < r; ++l) {
    auto c = h_.col(l);
    const auto nnz = static_cast<double>(std::count_if(c.begin(), c.end(), [](double v) {
      return v != 0.0;
    }));
    pairs += nnz * nnz;
  }
  const double sweep_cost = static_cast<double>(a_.stored_nonzeros() * r + n * r * r);
  if (pairs <= kExactObjectiveFactor * sweep_cost) return od_norm(a_, h_, Norm::L2);
  const double fast = od_norm_l2_expanded(a_, h_, caches_);
  if (fast * fast < kExpansionFloor * (a_offdiag2_ + caches_.gram_sq())) {
    return od_norm(a_, h_, Norm::L2);
  }
  return fast;
}

L1Solver::L1Solver(const SparseSymMatrix& a, FactorMatrix h0)
    : a_(a), h_(std::move(h0)), a_col_(a.size(), 0.0) {}

void L1Solver::sweep() {
  const Index n = h_.rows(), r = h_.cols();
  std::vector<double> hk(r);
  for (Index l = 0; l < r; ++l) {
    auto hl = h_.col(l);
    support_.clear();
    for (Index i = 0; i < n; ++i) {
      if (hl[i] != 0.0) support_.push_back(i);
    }
    for (Index k = 0; k < n; ++k) {
      auto idx = a_.row_indices(k);
      auto val = a_.row_values(k);
      for (std::size_t e = 0; e < idx.size(); ++e) a_col_[idx[e]] = val[e];
      for (Index t = 0; t < r; ++t) hk[t] = h_(k, t);

      weights_.clear();
      targets_.clear();
      for (Index i : support_) {
        const double hil = hl[i];
        if (i == k || hil == 0.0) continue;
        // sum over t != l of H(k,t) H(i,t); the l-th term of H(k,:) H(i,:)^T
        // cancels against + H(i,l) H(k,l).
        double dot = 0.0;
        for (Index t = 0; t < r; ++t) {
          if (t != l) dot += hk[t] * h_(i, t);
        }
        weights_.push_back(hil);
        targets_.push_back(a_col_[i] - dot);
      }
      const double next = constrained_weighted_median(weights_, targets_, ws_);
      if (next != 0.0 && hl[k] == 0.0) {
        // Rows below k are already in place, so k goes after them.
        support_.insert(std::upper_bound(support_.begin(), support_.end(), k), k);
      }
      hl[k] = next;

      for (Index j : idx) a_col_[j] = 0.0;
    }
  }
}

double L1Solver::objective() const { return od_norm(a_, h_, Norm::L1); }

ResidualSolver::ResidualSolver(const SparseSymMatrix& a, FactorMatrix h0, Norm loss)
    : a_(a), h_(std::move(h0)), r_(DenseSymMatrix::residual(a, h_)), loss_(loss) {}

void ResidualSolver::sweep() {
  std::vector<double> weights, targets;
  for (Index l = 0; l < h_.cols(); ++l) {
    auto h = h_.col(l);
    if (loss_ == Norm::L2) {
      r_.add_outer(h, 1.0);  // r_ now holds P
    } else {
      r_.assign(a_);
      for (Index t = 0; t < h_.cols(); ++t) {
        if (t != l) r_.add_outer(h_.col(t), -1.0);
      }
    }
    if (loss_ == Norm::L2) {
      for (Index k = 0; k < h.size(); ++k) h[k] = l2_coordinate_update(r_, h, k);
    } else {
      l1_pass(r_, h, ws_, weights, targets);
    }
    r_.add_outer(h, -1.0);
  }
}

double ResidualSolver::objective() const { return od_norm(r_, loss_); }

// ---------------------------------------------------------------------------

FitResult fit_l2(const SparseSymMatrix& a, FactorMatrix h0, const SolverConfig& cfg) {
  check_inputs(a, h0, cfg);
  L2Solver solver(a, std::move(h0));
  return drive(solver, cfg);
}

FitResult fit_l1(const SparseSymMatrix& a, FactorMatrix h0, const SolverConfig& cfg) {
  check_inputs(a, h0, cfg);
  L1Solver solver(a, std::move(h0));
  return drive(solver, cfg);
}

namespace {

FitResult fit_residual(const SparseSymMatrix& a, FactorMatrix h0, const SolverConfig& cfg,
                       Norm loss) {
  check_inputs(a, h0, cfg);
  if (a.size() > cfg.dense_cap) {
    throw PreconditionError("residual path needs an n x n array; n = " +
                            std::to_string(a.size()) + " exceeds the dense cap " +
                            std::to_string(cfg.dense_cap));
  }
  ResidualSolver solver(a, std::move(h0), loss);
  return drive(solver, cfg);
}

}  // namespace

FitResult fit_l2_residual(const SparseSymMatrix& a, FactorMatrix h0, const SolverConfig& cfg) {
  return fit_residual(a, std::move(h0), cfg, Norm::L2);
}

FitResult fit_l1_residual(const SparseSymMatrix& a, FactorMatrix h0, const SolverConfig& cfg) {
  return fit_residual(a, std::move(h0), cfg, Norm::L1);
}

FitResult fit(const SparseSymMatrix& a, FactorMatrix h0, const SolverConfig& cfg) {
  const bool free = cfg.path == SolverPath::ResidualFree;
  if (cfg.loss == Norm::L1) {
    return free ? fit_l1(a, std::move(h0), cfg) : fit_l1_residual(a, std::move(h0), cfg);
  }
  return free ? fit_l2(a, std::move(h0), cfg) : fit_l2_residual(a, std::move(h0), cfg);
}

}  // namespace odsym
