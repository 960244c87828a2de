#include "odsym/theory.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace odsym {

namespace {

double term(double aij, double g, RankOneNorm norm) {
  return norm == RankOneNorm::L1 ? std::abs(aij - g) : (aij != g ? 1.0 : 0.0);
}

// Contribution of row i: sum_{j != i} term(A_ij, h_i h_j).
double row_objective(const SparseSymMatrix& a, std::span<const double> h, Index i,
                     RankOneNorm norm) {
  double total = 0.0;
  auto idx = a.row_indices(i);
  auto val = a.row_values(i);
  std::size_t e = 0;
  for (Index j = 0; j < a.size(); ++j) {
    double aij = 0.0;
    if (e < idx.size() && idx[e] == j) aij = val[e++];
    if (j != i) total += term(aij, h[i] * h[j], norm);
  }
  return total;
}

}  // namespace

double rank_one_objective(const SparseSymMatrix& a, std::span<const double> h, RankOneNorm norm) {
  if (h.size() != a.size()) throw PreconditionError("rank_one_objective: dimension mismatch");
  double total = 0.0;
  for (Index i = 0; i < a.size(); ++i) total += row_objective(a, h, i, norm);
  return total;
}

std::vector<double> binarize_l0(std::span<const double> h) {
  std::vector<double> out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = h[i] == 0.0 ? 0.0 : 1.0;
  return out;
}

std::vector<double> binarize_l1(std::span<const double> h, const SparseSymMatrix& a) {
  if (h.size() != a.size()) throw PreconditionError("binarize_l1: dimension mismatch");
  std::vector<double> out(h.begin(), h.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] >= 0.0 && out[i] <= 1.0)) {
      throw PreconditionError("binarize_l1: h[" + std::to_string(i) + "] outside [0,1]");
    }
  }
  for (Index i = 0; i < out.size(); ++i) {
    if (out[i] == 0.0 || out[i] == 1.0) continue;
    out[i] = 0.0;
    const double at_zero = row_objective(a, out, i, RankOneNorm::L1);
    out[i] = 1.0;
    const double at_one = row_objective(a, out, i, RankOneNorm::L1);
    out[i] = at_one < at_zero ? 1.0 : 0.0;
  }
  return out;
}

RankOneSolution rank_one_bruteforce(const SparseSymMatrix& a, RankOneNorm norm) {
  const Index n = a.size();
  if (n > 22) throw PreconditionError("rank_one_bruteforce: n = " + std::to_string(n) + " > 22");
  RankOneSolution best;
  std::vector<double> h(n);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    for (Index i = 0; i < n; ++i) h[i] = (mask >> i) & 1U ? 1.0 : 0.0;
    const double obj = rank_one_objective(a, h, norm);
    if (mask == 0 || obj < best.objective) {
      best.objective = obj;
      best.h = h;
    }
  }
  return best;
}

FactorMatrix exact_factorization(const SparseSymMatrix& a) {
  Index pairs = 0;
  for (const auto& t : a.upper()) pairs += t.row != t.col;
  FactorMatrix h(a.size(), pairs);
  Index l = 0;
  for (const auto& t : a.upper()) {
    if (t.row == t.col) continue;
    h(t.row, l) = 1.0;
    h(t.col, l) = t.value;
    ++l;
  }
  return h;
}

}  // namespace odsym
