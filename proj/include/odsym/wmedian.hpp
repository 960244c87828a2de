#pragma once

#include <span>
#include <utility>
#include <vector>

namespace odsym {

/// Scratch space for repeated median solves (one per solver run).
class MedianWorkspace {
 public:
  std::vector<std::pair<double, double>>& breakpoints() { return breakpoints_; }

 private:
  std::vector<std::pair<double, double>> breakpoints_;  // (b_i / a_i, a_i)
};

/// Global minimizer of sum_i |a_i x - b_i| over x >= 0.
///
/// Terms with a_i == 0 are constant and dropped; the breakpoints b_i / a_i
/// are sorted and the slopes a_i, normalized by their sum, are accumulated
/// until the running total reaches 1/2. That breakpoint is an unconstrained
/// minimizer (the smallest one when the objective is flat between two
/// breakpoints) and, by convexity, clamping it at zero gives the constrained
/// minimizer. Returns 0 when every a_i is zero. Runs in O(m log m).
///
/// Throws std::invalid_argument on length mismatch, negative a_i or NaN.
double constrained_weighted_median(std::span<const double> a, std::span<const double> b,
                                   MedianWorkspace& ws);
double constrained_weighted_median(std::span<const double> a, std::span<const double> b);

}  // namespace odsym
