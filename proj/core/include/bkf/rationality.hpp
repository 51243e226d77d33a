#pragma once

#include <string>

#include "bkf/gibbs.hpp"
#include "bkf/hdi.hpp"

namespace bkf {

/// Joint rationality test on the fitted reduced form:
///   1. sum-to-one: the HDI of the draw-wise beta_prior + beta_mic + beta_mac
///      contains 1 (draw-wise, so coefficient correlation is respected);
///   2. zero-interaction: the HDI of beta_int contains 0.
struct RationalityCheck {
  Interval sum_hdi;
  Interval interaction_hdi;
  double sum_mean = 0.0;
  double interaction_mean = 0.0;
  bool sum_to_one = false;
  bool zero_interaction = false;

  bool rational() const { return sum_to_one && zero_interaction; }
};

RationalityCheck check_rationality(const PosteriorSummary& posterior, double mass = 0.95);

/// One-line verdict: "RATIONAL: both conditions satisfied" or an IRRATIONAL
/// line naming each failed condition as "FAIL sum-to-one" /
/// "FAIL zero-interaction".
std::string verdict_line(const RationalityCheck& check);

}  // namespace bkf
