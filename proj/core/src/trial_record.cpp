#include "bkf/trial_record.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "bkf/errors.hpp"

namespace bkf {

bool TrialRecord::magnitude_consistent() const {
  return std::abs(change_magnitude - (updated_expectation - prior)) <= kMagnitudeTolerance;
}

nlohmann::ordered_json to_json(const TrialRecord& r) {
  nlohmann::ordered_json j;
  j["persona"] = to_string(r.persona);
  j["scenario"] = to_string(r.scenario);
  j["model_id"] = r.model_id;
  j["trial_index"] = r.trial_index;
  j["prior"] = r.prior;
  j["signal_mic_level"] = r.signal_mic_level;
  j["signal_mac_level"] = r.signal_mac_level;
  j["updated_expectation"] = r.updated_expectation;
  j["change_magnitude"] = r.change_magnitude;
  j["rationale"] = r.rationale;
  j["raw_response"] = r.raw_response;
  j["timestamp"] = r.timestamp;
  j["inconsistent_magnitude"] = r.inconsistent_magnitude;
  return j;
}

TrialRecord trial_from_json(const nlohmann::json& j) {
  TrialRecord r;
  r.persona = persona_from_string(j.at("persona").get<std::string>());
  r.scenario = scenario_from_string(j.at("scenario").get<std::string>());
  r.model_id = j.at("model_id").get<std::string>();
  r.trial_index = j.at("trial_index").get<int>();
  r.prior = j.at("prior").get<double>();
  r.signal_mic_level = j.at("signal_mic_level").get<double>();
  r.signal_mac_level = j.at("signal_mac_level").get<double>();
  r.updated_expectation = j.at("updated_expectation").get<double>();
  r.change_magnitude = j.at("change_magnitude").get<double>();
  r.rationale = j.value("rationale", std::string());
  r.raw_response = j.value("raw_response", std::string());
  r.timestamp = j.value("timestamp", std::string());
  r.inconsistent_magnitude = j.value("inconsistent_magnitude", false);
  return r;
}

void append_trial_line(std::ostream& out, const TrialRecord& record) {
  out << to_json(record).dump() << '\n';
}

std::vector<TrialRecord> read_trials_jsonl(const std::filesystem::path& path, bool skip_torn_tail) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trial records file: " + path.string());
  std::vector<TrialRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(trial_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      const bool at_tail = in.peek() == std::char_traits<char>::eof();
      if (skip_torn_tail && at_tail) break;
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": malformed trial record: " + e.what());
    }
  }
  return records;
}

}  // namespace bkf
