#pragma once

#include <vector>

namespace bkf {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return hi - lo; }
};

/// Highest-density interval from posterior draws: the shortest window over
/// the sorted sample containing ceil(mass * n) draws. Throws InvalidParameter
/// for mass outside (0, 1) and TooFewDraws below 100 draws, where the
/// shortest-window estimate is too noisy to act on.
Interval hdi(std::vector<double> draws, double mass = 0.95);

}  // namespace bkf
