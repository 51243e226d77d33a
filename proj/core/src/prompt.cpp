#include "bkf/prompt.hpp"

#include "bkf/format.hpp"

namespace bkf {

namespace {

struct PersonaWording {
  const char* metric;        // growth metric named in context and task
  const char* micro_source;  // what the micro shock describes
  const char* rationale_cue; // persona-specific weighing instruction
};

PersonaWording wording_for(PersonaKind kind) {
  if (kind == PersonaKind::Household) {
    return {"your annual household income growth",
            "Your personal income from your workplace",
            "Consider your family's financial security when weighing the two updates."};
  }
  return {"your firm's annual real profit growth",
          "Your firm's sales and revenue performance",
          "Evaluate how firm-specific sales and national GDP growth jointly determine your "
          "profitability."};
}

}  // namespace

PromptBundle render_prompt(const Persona& persona, double baseline, double shock_mic,
                           double shock_mac) {
  validate(persona);
  const PersonaWording w = wording_for(persona.kind);
  const std::string base_pct = format_percent(baseline, false);
  const std::string mic_pct = format_percent(shock_mic, true);
  const std::string mac_pct = format_percent(shock_mac, true);

  std::string user;
  user += "Context: Until now, your baseline expectation for " + std::string(w.metric) + " was " +
          base_pct + ".\n\n";
  user += "New Information:\n";
  user += "1. Micro Update: " + std::string(w.micro_source) + " is expected to change by " +
          mic_pct + " over the next 12 months.\n";
  user += "2. Macro Update: National GDP growth is expected to change by " + mac_pct +
          " over the next 12 months.\n\n";
  user += "Task Instruction: Based on your identity, update your expectation for " +
          std::string(w.metric) +
          " for the next 12 months. Evaluate if the broad economic trend reinforces or "
          "contradicts your internal/personal update. " +
          w.rationale_cue + "\n\n";
  user += "Output Format: Output ONLY a single JSON object:\n";
  user += "{\n";
  user += "  \"Prior_Expectation\": \"" + base_pct + "\",\n";
  user += "  \"Updated_Expectation\": X.XX,\n";
  user += "  \"Change_Magnitude\": Y.YY,\n";
  user += "  \"Rationale\": \"Explain your signal integration logic...\"\n";
  user += "}\n";

  return PromptBundle{persona.system_text, user};
}

PromptBundle render_prompt(const Persona& persona, const ScenarioSpec& scenario) {
  validate(scenario);
  return render_prompt(persona, scenario.baseline, scenario.shock_mic, scenario.shock_mac);
}

}  // namespace bkf
