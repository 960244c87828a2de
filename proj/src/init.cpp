#include "odsym/init.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "odsym/rng.hpp"
#include "odsym/wmedian.hpp"

namespace odsym {

FactorMatrix init_zero(Index n, Index r) { return FactorMatrix(n, r, 0.0); }

FactorMatrix init_random(Index n, Index r, std::uint64_t seed) {
  FactorMatrix h(n, r);
  Rng rng(seed);
  for (Index l = 0; l < r; ++l) {
    for (Index i = 0; i < n; ++i) h(i, l) = uniform01(rng);
  }
  return h;
}

FactorMatrix init_greedy(const SparseSymMatrix& a, Index r, Norm loss, GreedyOptions opts) {
  const Index n = a.size();
  if (r == 0 || r > n) {
    throw PreconditionError("greedy init needs 1 <= r <= n (r = " + std::to_string(r) +
                            ", n = " + std::to_string(n) + ")");
  }
  const Index refreshes = opts.score_refreshes.value_or(2 * r);

  FactorMatrix h(n, r);
  std::vector<double> w(n), score(n), hw(r), overlap(r), a_col(n, 0.0);
  std::vector<char> selected(n);
  std::vector<Index> members, order;
  std::vector<double> weights, targets;
  MedianWorkspace ws;

  auto add_column_of_a = [&](Index k) {
    auto idx = a.row_indices(k);
    auto val = a.row_values(k);
    for (std::size_t e = 0; e < idx.size(); ++e) w[idx[e]] += val[e];
  };

  for (Index j = 0; j < r; ++j) {
    std::fill(w.begin(), w.end(), 1.0);
    std::fill(selected.begin(), selected.end(), 0);
    std::fill(overlap.begin(), overlap.end(), 0.0);  // H(J,j)^T H(J,0:j)
    members.clear();
    order.clear();
    std::size_t next_in_order = 0;
    double col_norm = 0.0;

    for (Index i = 1; i <= n; ++i) {
      Index k = 0;
      if (i < refreshes) {
        // s = A w - H(:,0:j) (H(:,0:j)^T w), then mask the selected rows.
        for (Index t = 0; t < j; ++t) {
          auto ht = h.col(t);
          hw[t] = std::inner_product(ht.begin(), ht.end(), w.begin(), 0.0);
        }
        double best = -std::numeric_limits<double>::infinity();
        bool found = false;
        for (Index m = 0; m < n; ++m) {
          double s = 0.0;
          auto idx = a.row_indices(m);
          auto val = a.row_values(m);
          for (std::size_t e = 0; e < idx.size(); ++e) s += val[e] * w[idx[e]];
          for (Index t = 0; t < j; ++t) s -= h(m, t) * hw[t];
          score[m] = s;
          if (!selected[m] && (!found || s > best)) {
            best = s;
            k = m;
            found = true;
          }
        }
      } else {
        // The score is stale from here on; repeated masked argmax visits the
        // unselected rows in descending score order, lowest index first.
        if (order.empty()) {
          for (Index m = 0; m < n; ++m) {
            if (!selected[m]) order.push_back(m);
          }
          std::stable_sort(order.begin(), order.end(),
                           [&](Index x, Index y) { return score[x] > score[y]; });
        }
        k = order[next_in_order++];
      }

      double value = 0.0;
      if (i == 1) {
        value = 1.0;
        std::fill(w.begin(), w.end(), 0.0);
        add_column_of_a(k);
      } else {
        if (loss == Norm::L2) {
          double b = 0.0;
          auto idx = a.row_indices(k);
          auto val = a.row_values(k);
          for (std::size_t e = 0; e < idx.size(); ++e) {
            if (selected[idx[e]]) b += h(idx[e], j) * val[e];
          }
          for (Index t = 0; t < j; ++t) b -= overlap[t] * h(k, t);
          value = b > 0.0 ? b / col_norm : 0.0;
        } else {
          auto idx = a.row_indices(k);
          auto val = a.row_values(k);
          for (std::size_t e = 0; e < idx.size(); ++e) a_col[idx[e]] = val[e];
          weights.clear();
          targets.clear();
          for (Index m : members) {
            double rk = a_col[m];
            for (Index t = 0; t < j; ++t) rk -= h(m, t) * h(k, t);
            weights.push_back(h(m, j));
            targets.push_back(rk);
          }
          for (Index q : idx) a_col[q] = 0.0;
          value = constrained_weighted_median(weights, targets, ws);
        }
        add_column_of_a(k);
      }

      h(k, j) = value;
      selected[k] = 1;
      col_norm += value * value;
      if (value != 0.0) {
        members.push_back(k);
        for (Index t = 0; t < j; ++t) overlap[t] += value * h(k, t);
      }
    }
  }
  return h;
}

FactorMatrix initialize(const SparseSymMatrix& a, Index r, InitKind kind, Norm loss,
                        std::uint64_t seed) {
  switch (kind) {
    case InitKind::Zero:
      return init_zero(a.size(), r);
    case InitKind::Random:
      return init_random(a.size(), r, seed);
    case InitKind::Greedy:
      return init_greedy(a, r, loss);
  }
  throw PreconditionError("unknown initialization");
}

}  // namespace odsym
