#pragma once

#include <string>

#include "bkf/persona.hpp"
#include "bkf/scenario.hpp"
#include "bkf/trial_record.hpp"

namespace bkf {

/// Extracts the first JSON object embedded in an agent's raw text output and
/// builds a trial record from it. Live models wrap the object in prose and
/// code fences at a nonzero rate, so this scans for the first balanced-brace
/// block that parses, rather than requiring the whole string to be JSON.
///
/// Updated_Expectation and Change_Magnitude are accepted as JSON numbers or
/// as strings with an optional trailing percent sign. Rationale is optional.
/// An inconsistent Change_Magnitude sets the record's validation flag; it is
/// never a parse failure (estimation only consumes Updated_Expectation).
///
/// Plan coordinates (model_id, trial_index, timestamp) are left for the
/// caller to fill. Throws NoJsonFound, MissingField, NonNumericField.
TrialRecord parse_response(const std::string& raw, const ScenarioSpec& scenario,
                           const Persona& persona);

}  // namespace bkf
