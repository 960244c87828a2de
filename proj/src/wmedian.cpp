#include "odsym/wmedian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace odsym {

double constrained_weighted_median(std::span<const double> a, std::span<const double> b,
                                   MedianWorkspace& ws) {
  if (a.size() != b.size()) throw std::invalid_argument("weighted median: length mismatch");
  auto& s = ws.breakpoints();
  s.clear();
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) {
      throw std::invalid_argument("weighted median: NaN input");
    }
    if (a[i] < 0.0) throw std::invalid_argument("weighted median: negative weight");
    if (a[i] != 0.0) {
      s.emplace_back(b[i] / a[i], a[i]);
      total += a[i];
    }
  }
  if (s.empty()) return 0.0;

  std::stable_sort(s.begin(), s.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  double cumulated = 0.0;
  double x = s.back().first;
  for (const auto& [point, weight] : s) {
    cumulated += weight / total;
    if (cumulated >= 0.5) {
      x = point;
      break;
    }
  }
  return std::max(0.0, x);
}

double constrained_weighted_median(std::span<const double> a, std::span<const double> b) {
  MedianWorkspace ws;
  return constrained_weighted_median(a, b, ws);
}

}  // namespace odsym
