#include "bkf/plan.hpp"

#include <cmath>

#include "bkf/errors.hpp"

namespace bkf {

TrialPlan default_plan(const std::vector<std::string>& model_ids, double baseline, double delta,
                       std::uint64_t seed) {
  TrialPlan plan;
  plan.personas = default_personas();
  plan.scenarios = build_scenario_matrix(baseline, delta);
  plan.model_ids = model_ids;
  plan.seed = seed;
  validate(plan);
  return plan;
}

void validate(const TrialPlan& plan) {
  if (plan.personas.empty()) throw InvalidParameter("plan needs at least one persona");
  if (plan.scenarios.empty()) throw InvalidParameter("plan needs at least one scenario");
  if (plan.model_ids.empty()) throw InvalidParameter("plan needs at least one model id");
  if (plan.trials_per_cell <= 0) throw InvalidParameter("trials_per_cell must be positive");
  if (!std::isfinite(plan.temperature) || plan.temperature < 0.0)
    throw InvalidParameter("temperature must be >= 0");
  for (const auto& p : plan.personas) validate(p);
  for (const auto& s : plan.scenarios) validate(s);
}

}  // namespace bkf
