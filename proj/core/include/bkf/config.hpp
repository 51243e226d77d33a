#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bkf/agents.hpp"
#include "bkf/campaign.hpp"
#include "bkf/chat_client.hpp"
#include "bkf/gibbs.hpp"
#include "bkf/persona.hpp"
#include "bkf/plan.hpp"

namespace bkf {

/// Which response generator a campaign uses. "rational_kf" is the
/// weights-sum-to-one benchmark, "synthetic" takes explicit reduced-form
/// coefficients, "live_llm" talks to a chat endpoint.
struct AgentConfig {
  std::string kind = "rational_kf";
  double noise_sd = 0.0;
  std::optional<ReducedFormParams> params;  // required for kind "synthetic"
};

struct FinetuneConfig {
  std::size_t n = 1000;
  ShockSampler sampler = ShockSampler::GridS1toS4;
  double uniform_lo = -10.0;
  double uniform_hi = 10.0;
};

/// Everything a pipeline run needs, loadable from one JSON file. Credentials
/// never appear here: the endpoint block names an environment variable and
/// load_config rejects embedded key material.
struct ToolkitConfig {
  double baseline = 3.0;
  double delta = 5.0;
  int trials_per_cell = 30;
  double temperature = 0.7;
  std::uint64_t seed = 0;
  std::vector<std::string> model_ids = {"rational-kf"};
  std::vector<Persona> personas;  // empty -> both built-ins
  AgentConfig agent;
  std::optional<EndpointConfig> endpoint;
  PriorSpec prior;
  McmcConfig mcmc;  // its seed field is ignored; the run seed governs
  FinetuneConfig finetune;
};

ToolkitConfig default_config();

/// Parses and validates. JSON syntax errors carry path:line:column; semantic
/// errors name the offending field. Unknown keys are rejected (typo guard).
ToolkitConfig load_config(const std::filesystem::path& path);
ToolkitConfig config_from_json(const nlohmann::json& j, const std::string& source);

nlohmann::ordered_json to_json(const ToolkitConfig& config);

void validate(const ToolkitConfig& config);

/// The campaign plan implied by the config (personas, scenario matrix,
/// models, trials, temperature, seed).
TrialPlan make_plan(const ToolkitConfig& config);

/// The response backend implied by the agent block. Throws InvalidParameter
/// for kind "live_llm" without an endpoint block.
AgentBackend make_backend(const ToolkitConfig& config);

}  // namespace bkf
