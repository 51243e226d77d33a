#include "bkf/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "bkf/errors.hpp"
#include "bkf/scenario.hpp"

namespace bkf {

namespace {

using nlohmann::json;

std::string joined(const std::string& ctx, const std::string& key) {
  return ctx.empty() ? key : ctx + "." + key;
}

[[noreturn]] void fail_field(const std::string& field, const std::string& why) {
  throw InvalidParameter("config field '" + field + "' " + why);
}

void check_keys(const json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        known = true;
        break;
      }
    if (!known) throw InvalidParameter("unknown config field '" + joined(ctx, item.key()) + "'");
  }
}

double read_number(const json& obj, const char* key, double fallback, const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) fail_field(joined(ctx, key), "must be a number");
  return obj.at(key).get<double>();
}

int read_int(const json& obj, const char* key, int fallback, const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) fail_field(joined(ctx, key), "must be an integer");
  return obj.at(key).get<int>();
}

std::uint64_t read_u64(const json& obj, const char* key, std::uint64_t fallback,
                       const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    fail_field(joined(ctx, key), "must be a non-negative integer");
  return v.get<std::uint64_t>();
}

bool read_bool(const json& obj, const char* key, bool fallback, const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) fail_field(joined(ctx, key), "must be a boolean");
  return obj.at(key).get<bool>();
}

std::string read_string(const json& obj, const char* key, const std::string& fallback,
                        const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) fail_field(joined(ctx, key), "must be a string");
  return obj.at(key).get<std::string>();
}

ReducedFormParams read_params(const json& obj, const std::string& ctx) {
  check_keys(obj, ctx, {"beta_prior", "beta_mic", "beta_mac", "beta_int"});
  ReducedFormParams p;
  p.beta_prior = read_number(obj, "beta_prior", 0.0, ctx);
  p.beta_mic = read_number(obj, "beta_mic", 0.0, ctx);
  p.beta_mac = read_number(obj, "beta_mac", 0.0, ctx);
  p.beta_int = read_number(obj, "beta_int", 0.0, ctx);
  return p;
}

EndpointConfig read_endpoint(const json& obj) {
  for (const char* secret : {"api_key", "key", "token", "secret"})
    if (obj.contains(secret))
      throw InvalidParameter(
          "config must not embed key material; endpoint.api_key_env_var names the environment "
          "variable that holds it");
  check_keys(obj, "endpoint",
             {"base_url", "chat_path", "api_key_env_var", "api_key_header", "api_key_prefix",
              "response_text_path", "timeout_ms", "max_retries", "max_parallel",
              "initial_backoff_ms"});
  EndpointConfig e;
  e.base_url = read_string(obj, "base_url", e.base_url, "endpoint");
  e.chat_path = read_string(obj, "chat_path", e.chat_path, "endpoint");
  e.api_key_env_var = read_string(obj, "api_key_env_var", e.api_key_env_var, "endpoint");
  e.api_key_header = read_string(obj, "api_key_header", e.api_key_header, "endpoint");
  e.api_key_prefix = read_string(obj, "api_key_prefix", e.api_key_prefix, "endpoint");
  if (obj.contains("response_text_path")) {
    const json& path = obj.at("response_text_path");
    if (!path.is_array()) fail_field("endpoint.response_text_path", "must be an array of strings");
    e.response_text_path.clear();
    for (const json& part : path) {
      if (!part.is_string())
        fail_field("endpoint.response_text_path", "must be an array of strings");
      e.response_text_path.push_back(part.get<std::string>());
    }
  }
  e.timeout = std::chrono::milliseconds(
      read_int(obj, "timeout_ms", static_cast<int>(e.timeout.count()), "endpoint"));
  e.max_retries = read_int(obj, "max_retries", e.max_retries, "endpoint");
  e.max_parallel = read_int(obj, "max_parallel", e.max_parallel, "endpoint");
  e.initial_backoff = std::chrono::milliseconds(
      read_int(obj, "initial_backoff_ms", static_cast<int>(e.initial_backoff.count()), "endpoint"));
  return e;
}

}  // namespace

ToolkitConfig default_config() {
  ToolkitConfig config;
  config.personas = default_personas();
  return config;
}

ToolkitConfig config_from_json(const json& j, const std::string& source) {
  if (!j.is_object()) throw InvalidParameter(source + ": config root must be a JSON object");
  check_keys(j, "",
             {"baseline", "delta", "trials_per_cell", "temperature", "seed", "model_ids",
              "personas", "persona_overrides", "agent", "endpoint", "estimation", "finetune"});

  ToolkitConfig config = default_config();
  config.baseline = read_number(j, "baseline", config.baseline, "");
  config.delta = read_number(j, "delta", config.delta, "");
  config.trials_per_cell = read_int(j, "trials_per_cell", config.trials_per_cell, "");
  config.temperature = read_number(j, "temperature", config.temperature, "");
  config.seed = read_u64(j, "seed", config.seed, "");

  if (j.contains("model_ids")) {
    if (!j.at("model_ids").is_array()) fail_field("model_ids", "must be an array of strings");
    config.model_ids.clear();
    for (const json& id : j.at("model_ids")) {
      if (!id.is_string() || id.get<std::string>().empty())
        fail_field("model_ids", "must be an array of non-empty strings");
      config.model_ids.push_back(id.get<std::string>());
    }
  }

  std::vector<PersonaKind> kinds = {PersonaKind::Household, PersonaKind::Ceo};
  if (j.contains("personas")) {
    if (!j.at("personas").is_array()) fail_field("personas", "must be an array of persona names");
    kinds.clear();
    for (const json& name : j.at("personas")) {
      if (!name.is_string()) fail_field("personas", "must be an array of persona names");
      try {
        kinds.push_back(persona_from_string(name.get<std::string>()));
      } catch (const InvalidParameter& e) {
        fail_field("personas", e.what());
      }
    }
  }
  config.personas.clear();
  for (PersonaKind kind : kinds) config.personas.push_back(default_persona(kind));
  if (j.contains("persona_overrides")) {
    const json& overrides = j.at("persona_overrides");
    if (!overrides.is_object()) fail_field("persona_overrides", "must map persona name to text");
    for (const auto& item : overrides.items()) {
      PersonaKind kind;
      try {
        kind = persona_from_string(item.key());
      } catch (const InvalidParameter& e) {
        fail_field("persona_overrides", e.what());
      }
      if (!item.value().is_string()) fail_field(joined("persona_overrides", item.key()), "must be a string");
      for (Persona& p : config.personas)
        if (p.kind == kind) p.system_text = item.value().get<std::string>();
    }
  }

  if (j.contains("agent")) {
    const json& agent = j.at("agent");
    if (!agent.is_object()) fail_field("agent", "must be an object");
    check_keys(agent, "agent", {"kind", "noise_sd", "params"});
    config.agent.kind = read_string(agent, "kind", config.agent.kind, "agent");
    config.agent.noise_sd = read_number(agent, "noise_sd", config.agent.noise_sd, "agent");
    if (agent.contains("params")) {
      if (!agent.at("params").is_object()) fail_field("agent.params", "must be an object");
      config.agent.params = read_params(agent.at("params"), "agent.params");
    }
  }

  if (j.contains("endpoint")) {
    if (!j.at("endpoint").is_object()) fail_field("endpoint", "must be an object");
    config.endpoint = read_endpoint(j.at("endpoint"));
  }

  if (j.contains("estimation")) {
    const json& est = j.at("estimation");
    if (!est.is_object()) fail_field("estimation", "must be an object");
    check_keys(est, "estimation", {"prior", "mcmc"});
    if (est.contains("prior")) {
      const json& prior = est.at("prior");
      if (!prior.is_object()) fail_field("estimation.prior", "must be an object");
      check_keys(prior, "estimation.prior",
                 {"beta_variance", "sigma2_shape", "sigma2_rate", "standardize"});
      config.prior.beta_variance =
          read_number(prior, "beta_variance", config.prior.beta_variance, "estimation.prior");
      config.prior.sigma2_shape =
          read_number(prior, "sigma2_shape", config.prior.sigma2_shape, "estimation.prior");
      config.prior.sigma2_rate =
          read_number(prior, "sigma2_rate", config.prior.sigma2_rate, "estimation.prior");
      config.prior.standardize =
          read_bool(prior, "standardize", config.prior.standardize, "estimation.prior");
    }
    if (est.contains("mcmc")) {
      const json& mcmc = est.at("mcmc");
      if (!mcmc.is_object()) fail_field("estimation.mcmc", "must be an object");
      check_keys(mcmc, "estimation.mcmc", {"chains", "iterations", "burn_in", "thin"});
      config.mcmc.chains = read_int(mcmc, "chains", config.mcmc.chains, "estimation.mcmc");
      config.mcmc.iterations =
          read_int(mcmc, "iterations", config.mcmc.iterations, "estimation.mcmc");
      config.mcmc.burn_in = read_int(mcmc, "burn_in", config.mcmc.burn_in, "estimation.mcmc");
      config.mcmc.thin = read_int(mcmc, "thin", config.mcmc.thin, "estimation.mcmc");
    }
  }

  if (j.contains("finetune")) {
    const json& ft = j.at("finetune");
    if (!ft.is_object()) fail_field("finetune", "must be an object");
    check_keys(ft, "finetune", {"n", "sampler", "uniform_lo", "uniform_hi"});
    const int n = read_int(ft, "n", static_cast<int>(config.finetune.n), "finetune");
    if (n < 1) fail_field("finetune.n", "must be >= 1");
    config.finetune.n = static_cast<std::size_t>(n);
    if (ft.contains("sampler")) {
      try {
        config.finetune.sampler = sampler_from_string(read_string(ft, "sampler", "", "finetune"));
      } catch (const InvalidParameter& e) {
        fail_field("finetune.sampler", e.what());
      }
    }
    config.finetune.uniform_lo =
        read_number(ft, "uniform_lo", config.finetune.uniform_lo, "finetune");
    config.finetune.uniform_hi =
        read_number(ft, "uniform_hi", config.finetune.uniform_hi, "finetune");
  }

  validate(config);
  return config;
}

ToolkitConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  json parsed;
  try {
    parsed = json::parse(content);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t upto = e.byte > 0 ? std::min(content.size(), e.byte - 1) : 0;
    for (std::size_t i = 0; i < upto; ++i) {
      if (content[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InvalidParameter(path.string() + ":" + std::to_string(line) + ":" +
                           std::to_string(column) + ": invalid JSON: " + e.what());
  }
  return config_from_json(parsed, path.string());
}

void validate(const ToolkitConfig& config) {
  if (!std::isfinite(config.baseline)) fail_field("baseline", "must be finite");
  if (!(config.delta > 0.0) || !std::isfinite(config.delta))
    fail_field("delta", "must be > 0");
  if (config.trials_per_cell < 1) fail_field("trials_per_cell", "must be >= 1");
  if (!(config.temperature >= 0.0) || !std::isfinite(config.temperature))
    fail_field("temperature", "must be >= 0");
  if (config.model_ids.empty()) fail_field("model_ids", "must list at least one model");
  if (config.personas.empty()) fail_field("personas", "must list at least one persona");
  for (const Persona& p : config.personas) {
    try {
      bkf::validate(p);
    } catch (const InvalidParameter& e) {
      fail_field(joined("persona_overrides", to_string(p.kind)), e.what());
    }
  }

  if (config.agent.kind != "rational_kf" && config.agent.kind != "synthetic" &&
      config.agent.kind != "live_llm")
    fail_field("agent.kind", "must be one of rational_kf, synthetic, live_llm");
  if (!(config.agent.noise_sd >= 0.0) || !std::isfinite(config.agent.noise_sd))
    fail_field("agent.noise_sd", "must be >= 0");
  if (config.agent.kind == "synthetic" && !config.agent.params)
    fail_field("agent.params", "is required for agent.kind = synthetic");
  if (config.agent.params) {
    try {
      bkf::validate(*config.agent.params);
    } catch (const InvalidParameter& e) {
      fail_field("agent.params", e.what());
    }
  }
  if (config.agent.kind == "live_llm" && !config.endpoint)
    fail_field("endpoint", "is required for agent.kind = live_llm");
  if (config.endpoint) {
    if (config.endpoint->base_url.empty()) fail_field("endpoint.base_url", "must be set");
    if (config.endpoint->api_key_env_var.empty())
      fail_field("endpoint.api_key_env_var", "must name an environment variable");
    if (config.endpoint->max_retries < 0) fail_field("endpoint.max_retries", "must be >= 0");
    if (config.endpoint->max_parallel < 1) fail_field("endpoint.max_parallel", "must be >= 1");
  }

  try {
    bkf::validate(config.prior);
  } catch (const InvalidParameter& e) {
    fail_field("estimation.prior", e.what());
  }
  try {
    bkf::validate(config.mcmc);
  } catch (const InvalidParameter& e) {
    fail_field("estimation.mcmc", e.what());
  }
  if (config.finetune.n < 1) fail_field("finetune.n", "must be >= 1");
  if (config.finetune.sampler == ShockSampler::UniformContinuous &&
      !(config.finetune.uniform_lo < config.finetune.uniform_hi))
    fail_field("finetune.uniform_lo", "must be below finetune.uniform_hi");
}

nlohmann::ordered_json to_json(const ToolkitConfig& config) {
  nlohmann::ordered_json j;
  j["baseline"] = config.baseline;
  j["delta"] = config.delta;
  j["trials_per_cell"] = config.trials_per_cell;
  j["temperature"] = config.temperature;
  j["seed"] = config.seed;
  j["model_ids"] = config.model_ids;
  j["personas"] = nlohmann::ordered_json::array();
  nlohmann::ordered_json overrides = nlohmann::ordered_json::object();
  for (const Persona& p : config.personas) {
    j["personas"].push_back(to_string(p.kind));
    if (p.system_text != default_persona(p.kind).system_text)
      overrides[to_string(p.kind)] = p.system_text;
  }
  if (!overrides.empty()) j["persona_overrides"] = overrides;
  j["agent"]["kind"] = config.agent.kind;
  j["agent"]["noise_sd"] = config.agent.noise_sd;
  if (config.agent.params) {
    j["agent"]["params"]["beta_prior"] = config.agent.params->beta_prior;
    j["agent"]["params"]["beta_mic"] = config.agent.params->beta_mic;
    j["agent"]["params"]["beta_mac"] = config.agent.params->beta_mac;
    j["agent"]["params"]["beta_int"] = config.agent.params->beta_int;
  }
  if (config.endpoint) {
    const EndpointConfig& e = *config.endpoint;
    j["endpoint"]["base_url"] = e.base_url;
    j["endpoint"]["chat_path"] = e.chat_path;
    j["endpoint"]["api_key_env_var"] = e.api_key_env_var;
    j["endpoint"]["api_key_header"] = e.api_key_header;
    j["endpoint"]["api_key_prefix"] = e.api_key_prefix;
    j["endpoint"]["response_text_path"] = e.response_text_path;
    j["endpoint"]["timeout_ms"] = e.timeout.count();
    j["endpoint"]["max_retries"] = e.max_retries;
    j["endpoint"]["max_parallel"] = e.max_parallel;
    j["endpoint"]["initial_backoff_ms"] = e.initial_backoff.count();
  }
  j["estimation"]["prior"]["beta_variance"] = config.prior.beta_variance;
  j["estimation"]["prior"]["sigma2_shape"] = config.prior.sigma2_shape;
  j["estimation"]["prior"]["sigma2_rate"] = config.prior.sigma2_rate;
  j["estimation"]["prior"]["standardize"] = config.prior.standardize;
  j["estimation"]["mcmc"]["chains"] = config.mcmc.chains;
  j["estimation"]["mcmc"]["iterations"] = config.mcmc.iterations;
  j["estimation"]["mcmc"]["burn_in"] = config.mcmc.burn_in;
  j["estimation"]["mcmc"]["thin"] = config.mcmc.thin;
  j["finetune"]["n"] = config.finetune.n;
  j["finetune"]["sampler"] = to_string(config.finetune.sampler);
  j["finetune"]["uniform_lo"] = config.finetune.uniform_lo;
  j["finetune"]["uniform_hi"] = config.finetune.uniform_hi;
  return j;
}

TrialPlan make_plan(const ToolkitConfig& config) {
  TrialPlan plan;
  plan.personas = config.personas;
  plan.scenarios = build_scenario_matrix(config.baseline, config.delta);
  plan.trials_per_cell = config.trials_per_cell;
  plan.model_ids = config.model_ids;
  plan.temperature = config.temperature;
  plan.seed = config.seed;
  return plan;
}

AgentBackend make_backend(const ToolkitConfig& config) {
  if (config.agent.kind == "rational_kf")
    return SyntheticBackend{rational_kf_params(config.agent.noise_sd)};
  if (config.agent.kind == "synthetic") {
    if (!config.agent.params)
      throw InvalidParameter("config field 'agent.params' is required for agent.kind = synthetic");
    ReducedFormParams params = *config.agent.params;
    params.noise_sd = config.agent.noise_sd;
    return SyntheticBackend{params};
  }
  if (config.agent.kind == "live_llm") {
    if (!config.endpoint)
      throw InvalidParameter("config field 'endpoint' is required for agent.kind = live_llm");
    return LiveBackend{*config.endpoint};
  }
  throw InvalidParameter("config field 'agent.kind' must be one of rational_kf, synthetic, live_llm");
}

}  // namespace bkf
