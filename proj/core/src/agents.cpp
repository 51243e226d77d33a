#include "bkf/agents.hpp"

#include <cmath>

#include "json.hpp"

#include "bkf/errors.hpp"
#include "bkf/format.hpp"

namespace bkf {

ReducedFormParams rational_kf_params(double noise_sd) {
  return ReducedFormParams{0.4, 0.4, 0.2, 0.0, noise_sd};
}

void validate(const ReducedFormParams& p) {
  if (!std::isfinite(p.beta_prior) || !std::isfinite(p.beta_mic) || !std::isfinite(p.beta_mac) ||
      !std::isfinite(p.beta_int))
    throw InvalidParameter("reduced-form betas must be finite");
  if (!std::isfinite(p.noise_sd) || p.noise_sd < 0.0)
    throw InvalidParameter("noise_sd must be >= 0");
}

double reduced_form_mean(const ReducedFormParams& p, double prior, double mic_level,
                         double mac_level) {
  return p.beta_prior * prior + p.beta_mic * mic_level + p.beta_mac * mac_level +
         p.beta_int * mic_level * mac_level;
}

double synthetic_respond(const ReducedFormParams& p, double prior, double mic_level,
                         double mac_level, Rng& rng) {
  validate(p);
  double value = reduced_form_mean(p, prior, mic_level, mac_level);
  if (p.noise_sd > 0.0) value += rng.normal(0.0, p.noise_sd);
  return value;
}

std::string synthetic_response_json(const ReducedFormParams& params, double baseline,
                                    double shock_mic, double shock_mac, Rng& rng) {
  const double updated =
      synthetic_respond(params, baseline, baseline + shock_mic, baseline + shock_mac, rng);
  nlohmann::ordered_json j;
  j["Prior_Expectation"] = format_percent(baseline, false);
  j["Updated_Expectation"] = updated;
  j["Change_Magnitude"] = updated - baseline;
  j["Rationale"] = "Linear weighting of the prior and both signal levels.";
  return j.dump();
}

std::string synthetic_response_json(const ReducedFormParams& params, const ScenarioSpec& scenario,
                                    Rng& rng) {
  return synthetic_response_json(params, scenario.baseline, scenario.shock_mic, scenario.shock_mac,
                                 rng);
}

}  // namespace bkf
