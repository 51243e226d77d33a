#include "bkf/chat_client.hpp"

#include <cctype>
#include <cstdlib>
#include <thread>

#include "httplib.h"

#include "bkf/errors.hpp"

namespace bkf {

namespace {

void emit(const LogSink& log, const nlohmann::ordered_json& event) {
  if (log) log(event);
}

bool is_index(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c);
  });
}

std::string extract_text(const nlohmann::json& body, const std::vector<std::string>& path) {
  const nlohmann::json* node = &body;
  for (const auto& step : path) {
    if (node->is_array() && is_index(step)) {
      const auto idx = static_cast<std::size_t>(std::stoul(step));
      if (idx >= node->size()) throw MalformedProviderResponse("response path index out of range");
      node = &(*node)[idx];
    } else if (node->is_object() && node->contains(step)) {
      node = &node->at(step);
    } else {
      throw MalformedProviderResponse("response missing path element: " + step);
    }
  }
  if (!node->is_string()) throw MalformedProviderResponse("completion text is not a string");
  return node->get<std::string>();
}

}  // namespace

void validate(const EndpointConfig& e) {
  if (e.base_url.empty()) throw InvalidParameter("endpoint base_url must be set");
  if (e.model_id.empty()) throw InvalidParameter("endpoint model_id must be set");
  if (e.api_key_env_var.empty())
    throw InvalidParameter("endpoint api_key_env_var must name an environment variable");
  if (e.max_retries < 0) throw InvalidParameter("max_retries must be >= 0");
  if (e.max_parallel < 1) throw InvalidParameter("max_parallel must be >= 1");
}

std::string resolve_api_key(const EndpointConfig& endpoint) {
  const char* key = std::getenv(endpoint.api_key_env_var.c_str());
  if (key == nullptr || *key == '\0')
    throw AuthError("environment variable " + endpoint.api_key_env_var +
                    " is not set; no request was sent");
  return key;
}

std::string live_respond(const EndpointConfig& endpoint, const PromptBundle& bundle,
                         const LogSink& log) {
  validate(endpoint);
  const std::string api_key = resolve_api_key(endpoint);

  nlohmann::ordered_json request;
  request["model"] = endpoint.model_id;
  request["messages"] = nlohmann::ordered_json::array(
      {{{"role", "system"}, {"content", bundle.system}},
       {{"role", "user"}, {"content", bundle.user}}});
  request["temperature"] = endpoint.temperature;
  const std::string body = request.dump();

  httplib::Client client(endpoint.base_url);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(endpoint.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers{{endpoint.api_key_header, endpoint.api_key_prefix + api_key}};

  auto backoff = endpoint.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    auto res = client.Post(endpoint.chat_path, headers, body, "application/json");

    if (res) {
      if (res->status == 200) {
        const auto parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (parsed.is_discarded())
          throw MalformedProviderResponse("provider returned non-JSON body");
        return extract_text(parsed, endpoint.response_text_path);
      }
      if (res->status == 401 || res->status == 403)
        throw AuthError("provider rejected credentials (HTTP " + std::to_string(res->status) +
                        ")");
      const bool retryable = res->status == 429 || res->status >= 500;
      if (!retryable)
        throw ProviderError("unexpected HTTP status " + std::to_string(res->status));
      if (attempt >= endpoint.max_retries) {
        if (res->status == 429)
          throw RateLimited("rate limited after " + std::to_string(attempt) + " retries");
        throw ProviderError("HTTP " + std::to_string(res->status) + " after " +
                            std::to_string(attempt) + " retries");
      }
      emit(log, {{"event", "retry"},
                 {"attempt", attempt + 1},
                 {"status", res->status},
                 {"backoff_ms", backoff.count()}});
    } else {
      const bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                             res.error() == httplib::Error::Read ||
                             res.error() == httplib::Error::Write;
      if (attempt >= endpoint.max_retries) {
        if (timed_out)
          throw TimeoutError("request timed out after " + std::to_string(attempt) + " retries");
        throw ProviderError("transport failure: " + httplib::to_string(res.error()));
      }
      emit(log, {{"event", "retry"},
                 {"attempt", attempt + 1},
                 {"transport_error", httplib::to_string(res.error())},
                 {"backoff_ms", backoff.count()}});
    }

    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

}  // namespace bkf
