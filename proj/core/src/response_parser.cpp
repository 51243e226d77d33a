#include "bkf/response_parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>

#include "json.hpp"

#include "bkf/errors.hpp"

namespace bkf {

namespace {

// Span of the balanced-brace block starting at `start` (which must index a
// '{'), honoring JSON string literals and escapes. npos if never closed.
std::size_t balanced_end(const std::string& text, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::string::npos;
}

std::optional<nlohmann::json> first_json_object(const std::string& text) {
  std::size_t pos = text.find('{');
  while (pos != std::string::npos) {
    const std::size_t end = balanced_end(text, pos);
    if (end == std::string::npos) return std::nullopt;
    const auto candidate =
        nlohmann::json::parse(text.substr(pos, end - pos + 1), nullptr, false);
    if (!candidate.is_discarded() && candidate.is_object()) return candidate;
    pos = text.find('{', pos + 1);
  }
  return std::nullopt;
}

double numeric_field(const nlohmann::json& obj, const std::string& name) {
  if (!obj.contains(name)) throw MissingField(name);
  const auto& v = obj.at(name);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    // trim whitespace and a trailing percent sign ("7.02%" or " 7.02 ")
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    if (e > b && s[e - 1] == '%') --e;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    s = s.substr(b, e - b);
    if (!s.empty()) {
      char* endp = nullptr;
      const double parsed = std::strtod(s.c_str(), &endp);
      if (endp == s.c_str() + s.size() && std::isfinite(parsed)) return parsed;
    }
  }
  throw NonNumericField(name);
}

}  // namespace

TrialRecord parse_response(const std::string& raw, const ScenarioSpec& scenario,
                           const Persona& persona) {
  const auto obj = first_json_object(raw);
  if (!obj) throw NoJsonFound();

  TrialRecord record;
  record.persona = persona.kind;
  record.scenario = scenario.id;
  record.prior = scenario.baseline;
  record.signal_mic_level = scenario.mic_level();
  record.signal_mac_level = scenario.mac_level();
  record.updated_expectation = numeric_field(*obj, "Updated_Expectation");
  record.change_magnitude = numeric_field(*obj, "Change_Magnitude");
  if (obj->contains("Rationale") && obj->at("Rationale").is_string())
    record.rationale = obj->at("Rationale").get<std::string>();
  record.raw_response = raw;
  record.inconsistent_magnitude = !record.magnitude_consistent();
  return record;
}

}  // namespace bkf
