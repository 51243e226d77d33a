#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "bkf/persona.hpp"
#include "bkf/scenario.hpp"

namespace bkf {

/// Tolerance on |change_magnitude - (updated_expectation - prior)|; a model
/// reporting both numbers at two decimals can be off by up to 0.01.
inline constexpr double kMagnitudeTolerance = 0.011;

/// One agent response, immutable after construction. This is the JSONL
/// interchange format between the campaign runner and the estimator.
struct TrialRecord {
  PersonaKind persona = PersonaKind::Household;
  ScenarioId scenario = ScenarioId::S1;
  std::string model_id;
  int trial_index = 0;
  double prior = 0.0;
  double signal_mic_level = 0.0;
  double signal_mac_level = 0.0;
  double updated_expectation = 0.0;
  double change_magnitude = 0.0;
  std::string rationale;
  std::string raw_response;
  std::string timestamp;                 // ISO-8601
  bool inconsistent_magnitude = false;   // soft validation flag, never a drop

  /// Recompute the consistency flag from the stored numbers.
  bool magnitude_consistent() const;
};

nlohmann::ordered_json to_json(const TrialRecord& record);
TrialRecord trial_from_json(const nlohmann::json& j);

/// One record per line, UTF-8, snake_case keys.
void append_trial_line(std::ostream& out, const TrialRecord& record);

/// Reads a whole JSONL file. Malformed lines raise IoError naming the line
/// number unless skip_torn_tail is set, in which case a trailing partial
/// line (interrupted write) is ignored.
std::vector<TrialRecord> read_trials_jsonl(const std::filesystem::path& path,
                                           bool skip_torn_tail = false);

}  // namespace bkf
