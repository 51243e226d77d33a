#include "bkf/scenario.hpp"

#include <cmath>

#include "bkf/errors.hpp"

namespace bkf {

const char* to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::S1: return "S1";
    case ScenarioId::S2: return "S2";
    case ScenarioId::S3: return "S3";
    case ScenarioId::S4: return "S4";
  }
  return "?";
}

ScenarioId scenario_from_string(const std::string& s) {
  if (s == "S1" || s == "s1") return ScenarioId::S1;
  if (s == "S2" || s == "s2") return ScenarioId::S2;
  if (s == "S3" || s == "s3") return ScenarioId::S3;
  if (s == "S4" || s == "s4") return ScenarioId::S4;
  throw InvalidParameter("unknown scenario id: " + s);
}

const char* information_state(ScenarioId id) {
  switch (id) {
    case ScenarioId::S1: return "Consistent Boom";
    case ScenarioId::S2: return "Consistent Bust";
    case ScenarioId::S3: return "Micro Divergent";
    case ScenarioId::S4: return "Macro Divergent";
  }
  return "?";
}

namespace {

// Sign pattern of (shock_mic, shock_mac) per scenario.
void signs_for(ScenarioId id, int& mic, int& mac) {
  switch (id) {
    case ScenarioId::S1: mic = +1; mac = +1; return;
    case ScenarioId::S2: mic = -1; mac = -1; return;
    case ScenarioId::S3: mic = +1; mac = -1; return;
    case ScenarioId::S4: mic = -1; mac = +1; return;
  }
}

}  // namespace

std::vector<ScenarioSpec> build_scenario_matrix(double baseline, double delta) {
  if (!std::isfinite(baseline)) throw InvalidParameter("baseline must be finite");
  if (!std::isfinite(delta) || delta <= 0.0) throw InvalidParameter("delta must be > 0");
  std::vector<ScenarioSpec> out;
  out.reserve(4);
  for (ScenarioId id : {ScenarioId::S1, ScenarioId::S2, ScenarioId::S3, ScenarioId::S4}) {
    int mic = 0;
    int mac = 0;
    signs_for(id, mic, mac);
    out.push_back(ScenarioSpec{id, mic * delta, mac * delta, baseline, delta});
  }
  return out;
}

void validate(const ScenarioSpec& scenario) {
  if (!std::isfinite(scenario.delta) || scenario.delta <= 0.0)
    throw InvalidParameter("scenario delta must be > 0");
  if (!std::isfinite(scenario.baseline)) throw InvalidParameter("scenario baseline must be finite");
  int mic = 0;
  int mac = 0;
  signs_for(scenario.id, mic, mac);
  if (scenario.shock_mic != mic * scenario.delta || scenario.shock_mac != mac * scenario.delta)
    throw InvalidParameter(std::string("scenario ") + to_string(scenario.id) +
                           " shocks must match the sign pattern with |shock| == delta");
}

}  // namespace bkf
