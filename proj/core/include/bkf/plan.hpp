#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bkf/persona.hpp"
#include "bkf/scenario.hpp"

namespace bkf {

/// Full factorial campaign: persona x scenario x model x trials_per_cell.
struct TrialPlan {
  std::vector<Persona> personas;
  std::vector<ScenarioSpec> scenarios;
  int trials_per_cell = 30;
  std::vector<std::string> model_ids;
  double temperature = 0.7;
  std::uint64_t seed = 0;

  std::size_t total_trials() const {
    return personas.size() * scenarios.size() * model_ids.size() *
           static_cast<std::size_t>(trials_per_cell);
  }
};

/// Default full-factorial plan: both personas, the four-scenario matrix at the
/// given baseline/delta, 30 trials per cell.
TrialPlan default_plan(const std::vector<std::string>& model_ids, double baseline = 3.0,
                       double delta = 5.0, std::uint64_t seed = 0);

/// Throws InvalidParameter on empty axes or non-positive trials_per_cell.
void validate(const TrialPlan& plan);

}  // namespace bkf
