#pragma once

#include <string>
#include <vector>

namespace bkf {

enum class ScenarioId { S1, S2, S3, S4 };

const char* to_string(ScenarioId id);             // "S1" ... "S4"
ScenarioId scenario_from_string(const std::string& s);

/// One cell of the 2x2 shock design. Shock signs follow the fixed pattern
/// S1 (+,+), S2 (-,-), S3 (+,-), S4 (-,+) with |shock| == delta; the
/// regression consumes signal LEVELS, i.e. baseline + shock.
struct ScenarioSpec {
  ScenarioId id = ScenarioId::S1;
  double shock_mic = 5.0;
  double shock_mac = 5.0;
  double baseline = 3.0;
  double delta = 5.0;

  double mic_level() const { return baseline + shock_mic; }
  double mac_level() const { return baseline + shock_mac; }
};

/// Human-readable label for the shock alignment, e.g. "Consistent Boom".
const char* information_state(ScenarioId id);

/// The four-scenario matrix for a given baseline and shock magnitude.
/// Throws InvalidParameter if delta <= 0 or inputs are non-finite.
std::vector<ScenarioSpec> build_scenario_matrix(double baseline, double delta);

/// Throws InvalidParameter unless the sign pattern and |shock| == delta hold.
void validate(const ScenarioSpec& scenario);

}  // namespace bkf
