#pragma once

#include <string>
#include <variant>

#include "bkf/chat_client.hpp"
#include "bkf/rng.hpp"
#include "bkf/scenario.hpp"

namespace bkf {

/// Coefficients of the pooled reduced-form regression
///   updated = b_prior * prior + b_mic * s_mic + b_mac * s_mac
///           + b_int * s_mic * s_mac + eps,   eps ~ N(0, noise_sd^2),
/// where s_mic / s_mac are signal levels (baseline + shock).
struct ReducedFormParams {
  double beta_prior = 0.0;
  double beta_mic = 0.0;
  double beta_mac = 0.0;
  double beta_int = 0.0;
  double noise_sd = 0.0;
};

/// The rational benchmark: weights sum to one, zero interaction
/// (b_mic = 0.4, b_mac = 0.2, b_prior = 1 - 0.4 - 0.2).
ReducedFormParams rational_kf_params(double noise_sd = 0.0);

/// Throws InvalidParameter on non-finite betas or negative noise_sd.
void validate(const ReducedFormParams& params);

/// Noise-free regression plane.
double reduced_form_mean(const ReducedFormParams& params, double prior, double mic_level,
                         double mac_level);

/// One synthetic draw: plane value plus Gaussian noise from the caller's rng.
double synthetic_respond(const ReducedFormParams& params, double prior, double mic_level,
                         double mac_level, Rng& rng);

/// Full response text in the constrained JSON schema, so the synthetic path
/// exercises the same parser as live output. Numbers are emitted at full
/// precision; two-decimal display is a reporting concern.
std::string synthetic_response_json(const ReducedFormParams& params, const ScenarioSpec& scenario,
                                    Rng& rng);

/// Same, for arbitrary shocks (continuous fine-tune sampling).
std::string synthetic_response_json(const ReducedFormParams& params, double baseline,
                                    double shock_mic, double shock_mac, Rng& rng);

// --- backend selection ---

struct SyntheticBackend {
  ReducedFormParams params;
};

struct LiveBackend {
  EndpointConfig endpoint;
};

using AgentBackend = std::variant<SyntheticBackend, LiveBackend>;

inline AgentBackend rational_kf_backend(double noise_sd = 0.0) {
  return SyntheticBackend{rational_kf_params(noise_sd)};
}

}  // namespace bkf
