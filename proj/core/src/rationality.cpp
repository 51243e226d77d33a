#include "bkf/rationality.hpp"

namespace bkf {

RationalityCheck check_rationality(const PosteriorSummary& posterior, double mass) {
  std::vector<double> sums;
  std::vector<double> interactions;
  sums.reserve(posterior.beta_draws.size());
  interactions.reserve(posterior.beta_draws.size());
  for (const auto& draw : posterior.beta_draws) {
    sums.push_back(draw[0] + draw[1] + draw[2]);
    interactions.push_back(draw[3]);
  }

  RationalityCheck check;
  for (double s : sums) check.sum_mean += s;
  check.sum_mean /= static_cast<double>(sums.size());
  for (double b : interactions) check.interaction_mean += b;
  check.interaction_mean /= static_cast<double>(interactions.size());

  check.sum_hdi = hdi(sums, mass);
  check.interaction_hdi = hdi(interactions, mass);
  check.sum_to_one = check.sum_hdi.contains(1.0);
  check.zero_interaction = check.interaction_hdi.contains(0.0);
  return check;
}

std::string verdict_line(const RationalityCheck& check) {
  if (check.rational()) return "RATIONAL: both conditions satisfied";
  std::string line = "IRRATIONAL:";
  if (!check.sum_to_one) line += " FAIL sum-to-one";
  if (!check.zero_interaction) line += " FAIL zero-interaction";
  return line;
}

}  // namespace bkf
