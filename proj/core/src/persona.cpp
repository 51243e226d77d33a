#include "bkf/persona.hpp"

#include "bkf/errors.hpp"

namespace bkf {

namespace {

const char* kHouseholdText =
    "You are a 35-year-old managing your household's finances. Your goal is to form the most "
    "accurate expectation of your future household income growth for the next year. You "
    "understand that your family's financial security depends on your ability to process new "
    "information correctly. You pay close attention to both personal news (from your workplace) "
    "and broader economic indicators like national GDP growth, as you recognize that "
    "macroeconomic health often filters down to job stability and salary increments.";

const char* kCeoText =
    "You are the CEO of a firm managing corporate strategy and financial performance. Your goal "
    "is to form the most accurate expectation of your firm's future real profit growth for the "
    "next year. You understand that your firm's market value and strategic growth depend on your "
    "ability to process new information correctly. You pay close attention to both internal "
    "company news (regarding sales and revenue) and national economic news (specifically "
    "regarding GDP growth trends), as you recognize these signals indicate the overall strength "
    "of the aggregate economy.";

}  // namespace

const char* to_string(PersonaKind kind) {
  return kind == PersonaKind::Household ? "household" : "ceo";
}

PersonaKind persona_from_string(const std::string& s) {
  if (s == "household" || s == "hh") return PersonaKind::Household;
  if (s == "ceo") return PersonaKind::Ceo;
  throw InvalidParameter("unknown persona: " + s + " (expected 'household'/'hh' or 'ceo')");
}

Persona default_persona(PersonaKind kind) {
  return Persona{kind, kind == PersonaKind::Household ? kHouseholdText : kCeoText};
}

std::vector<Persona> default_personas() {
  return {default_persona(PersonaKind::Household), default_persona(PersonaKind::Ceo)};
}

void validate(const Persona& persona) {
  if (persona.system_text.empty()) throw InvalidParameter("persona system_text must be non-empty");
  const char* required = persona.kind == PersonaKind::Household ? "household income growth"
                                                                : "real profit growth";
  if (persona.system_text.find(required) == std::string::npos)
    throw InvalidParameter(std::string("persona text for '") + to_string(persona.kind) +
                           "' must mention '" + required + "'");
}

}  // namespace bkf
