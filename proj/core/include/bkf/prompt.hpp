#pragma once

#include <string>

#include "bkf/persona.hpp"
#include "bkf/scenario.hpp"

namespace bkf {

/// One stateless chat exchange: system = identity priming, user = context +
/// new information + task instruction + output-format block.
struct PromptBundle {
  std::string system;
  std::string user;
};

/// Deterministic prompt assembly for a factorial-design cell.
PromptBundle render_prompt(const Persona& persona, const ScenarioSpec& scenario);

/// Same assembly for arbitrary shocks (used by the continuous fine-tune
/// sampler, which is not restricted to the four-scenario sign pattern).
PromptBundle render_prompt(const Persona& persona, double baseline, double shock_mic,
                           double shock_mac);

}  // namespace bkf
