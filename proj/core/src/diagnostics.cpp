#include "bkf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bkf/errors.hpp"

namespace bkf {

namespace {

void check_shape(const std::vector<std::vector<double>>& chains) {
  if (chains.empty()) throw InvalidParameter("diagnostics need at least one chain");
  const std::size_t n = chains.front().size();
  if (n < 4) throw TooFewDraws("diagnostics need at least 4 draws per chain");
  for (const auto& chain : chains)
    if (chain.size() != n) throw InvalidParameter("diagnostics need equal-length chains");
}

double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double variance_of(const std::vector<double>& xs, double mean) {
  double sum = 0.0;
  for (double x : xs) sum += (x - mean) * (x - mean);
  return sum / static_cast<double>(xs.size() - 1);
}

}  // namespace

double split_r_hat(const std::vector<std::vector<double>>& chains) {
  check_shape(chains);
  const std::size_t half = chains.front().size() / 2;

  std::vector<std::vector<double>> halves;
  halves.reserve(2 * chains.size());
  for (const auto& chain : chains) {
    halves.emplace_back(chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(half));
    halves.emplace_back(chain.end() - static_cast<std::ptrdiff_t>(half), chain.end());
  }

  std::vector<double> means;
  double w = 0.0;
  for (const auto& h : halves) {
    const double m = mean_of(h);
    means.push_back(m);
    w += variance_of(h, m);
  }
  w /= static_cast<double>(halves.size());

  const double grand = mean_of(means);
  double between = 0.0;  // B / n in the usual notation
  for (double m : means) between += (m - grand) * (m - grand);
  between /= static_cast<double>(means.size() - 1);

  if (w == 0.0) return between == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(half);
  const double var_plus = (n - 1.0) / n * w + between;
  return std::sqrt(var_plus / w);
}

double effective_sample_size(const std::vector<std::vector<double>>& chains) {
  check_shape(chains);
  const std::size_t m = chains.size();
  const std::size_t n = chains.front().size();
  const double total = static_cast<double>(m) * static_cast<double>(n);

  std::vector<double> means(m);
  double w = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    means[j] = mean_of(chains[j]);
    w += variance_of(chains[j], means[j]);
  }
  w /= static_cast<double>(m);

  double between = 0.0;
  if (m > 1) {
    const double grand = mean_of(means);
    for (double mu : means) between += (mu - grand) * (mu - grand);
    between /= static_cast<double>(m - 1);
  }
  const double nn = static_cast<double>(n);
  const double var_plus = (nn - 1.0) / nn * w + between;
  if (var_plus == 0.0) return total;

  // Biased (1/n) autocovariance averaged over chains, evaluated lazily.
  const auto acov = [&](std::size_t lag) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto& c = chains[j];
      double s = 0.0;
      for (std::size_t i = 0; i + lag < n; ++i) s += (c[i] - means[j]) * (c[i + lag] - means[j]);
      sum += s / nn;
    }
    return sum / static_cast<double>(m);
  };
  const auto rho = [&](std::size_t lag) { return 1.0 - (w - acov(lag)) / var_plus; };

  double pair_sum = 0.0;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    const double pair = rho(2 * k) + rho(2 * k + 1);
    if (pair <= 0.0) break;
    pair_sum += pair;
  }
  const double tau = std::max(2.0 * pair_sum - 1.0, 0.01);
  return total / tau;
}

}  // namespace bkf
