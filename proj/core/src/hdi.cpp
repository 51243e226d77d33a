#include "bkf/hdi.hpp"

#include <algorithm>
#include <cmath>

#include "bkf/errors.hpp"

namespace bkf {

Interval hdi(std::vector<double> draws, double mass) {
  if (!(mass > 0.0) || !(mass < 1.0)) throw InvalidParameter("hdi mass must lie in (0, 1)");
  if (draws.size() < 100)
    throw TooFewDraws("hdi needs at least 100 draws, got " + std::to_string(draws.size()));

  std::sort(draws.begin(), draws.end());
  const std::size_t n = draws.size();
  const auto k = static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n)));

  std::size_t best = 0;
  double best_width = draws[k - 1] - draws[0];
  for (std::size_t i = 1; i + k <= n; ++i) {
    const double width = draws[i + k - 1] - draws[i];
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  return {draws[best], draws[best + k - 1]};
}

}  // namespace bkf
