#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bkf/prompt.hpp"

namespace bkf {

/// One structured event (retry, parse failure, validation flag, ...).
/// Sinks must tolerate concurrent calls when the campaign runs in parallel.
using LogSink = std::function<void(const nlohmann::ordered_json&)>;

/// Provider-agnostic chat-completion endpoint. Secrets never live here:
/// only the NAME of the environment variable holding the API key.
struct EndpointConfig {
  std::string base_url;                       // e.g. "https://api.openai.com"
  std::string chat_path = "/v1/chat/completions";
  std::string model_id;
  std::string api_key_env_var;
  std::string api_key_header = "Authorization";
  std::string api_key_prefix = "Bearer ";
  // Path to the completion text in the provider's response JSON; numeric
  // components index arrays. The default fits OpenAI-style payloads.
  std::vector<std::string> response_text_path = {"choices", "0", "message", "content"};
  double temperature = 0.7;
  std::chrono::milliseconds timeout{30000};
  int max_retries = 3;
  int max_parallel = 4;
  std::chrono::milliseconds initial_backoff{500};
};

void validate(const EndpointConfig& endpoint);

/// Resolve the API key, throwing AuthError (before any network activity)
/// if the named environment variable is absent or empty.
std::string resolve_api_key(const EndpointConfig& endpoint);

/// One stateless chat request: system message plus a single user message,
/// no shared history between calls. Retries with exponential backoff on
/// 429/5xx/transport failures up to max_retries, logging one event per retry.
/// Returns the provider's completion text unmodified.
std::string live_respond(const EndpointConfig& endpoint, const PromptBundle& bundle,
                         const LogSink& log = {});

}  // namespace bkf
