#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bkf/trial_record.hpp"

namespace bkf {

inline constexpr std::array<const char*, 4> kCoefficientNames = {"beta_prior", "beta_mic",
                                                                 "beta_mac", "beta_int"};

/// Regression through the origin: columns are prior, micro signal level,
/// macro signal level, and the level product. No intercept; under the
/// rational benchmark the prior column carries the unexplained mass.
struct DesignMatrix {
  std::vector<std::array<double, 4>> rows;
  std::vector<double> response;  // updated expectations, same order as rows

  std::size_t n() const { return rows.size(); }
};

/// Pool by default, narrow per axis when set. Model ids compare exactly.
struct RecordFilter {
  std::optional<PersonaKind> persona;
  std::optional<std::string> model;
  std::optional<ScenarioId> scenario;
};

bool matches(const RecordFilter& filter, const TrialRecord& record);

/// Assembles the regression inputs from trial records. Throws
/// InvalidParameter when nothing matches, and RankDeficient when the
/// selected rows cannot identify all four coefficients (e.g. a single
/// scenario, where every design row is identical). check_rank = false
/// skips that guard for callers assembling partial data on purpose.
DesignMatrix build_design(const std::vector<TrialRecord>& records, const RecordFilter& filter = {},
                          bool check_rank = true);

}  // namespace bkf
