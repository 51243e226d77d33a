#pragma once

#include <string>
#include <vector>

namespace bkf {

enum class PersonaKind { Household, Ceo };

const char* to_string(PersonaKind kind);          // "household" / "ceo"
PersonaKind persona_from_string(const std::string& s);

/// Identity priming block prepended to every trial as the system message.
struct Persona {
  PersonaKind kind = PersonaKind::Household;
  std::string system_text;
};

/// Built-in priming texts. The household text mentions household income
/// growth, the CEO text mentions real profit growth; overrides must keep
/// those phrases (enforced by validate).
Persona default_persona(PersonaKind kind);

std::vector<Persona> default_personas();

/// Throws InvalidParameter if the text is empty or lacks the phrase that
/// anchors the persona's growth metric.
void validate(const Persona& persona);

}  // namespace bkf
