#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <cstdlib>

#include "simt/backends.hpp"

namespace simt {
namespace {

bool isSpaceChar(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

bool isEosFinish(std::string_view reason) {
  return reason == "stop" || reason == "eos" || reason == "eos_token" || reason == "end_of_sequence";
}

}  // namespace

void HttpBackendConfig::validate() const {
  if (retries < 0) throw RangeError("retries must be >= 0");
  if (timeoutMs <= 0) throw RangeError("timeoutMs must be > 0");
  if (maxUnitTokens <= 0) throw RangeError("maxUnitTokens must be > 0");
}

nlohmann::json completionRequest(const HttpBackendConfig& config, const std::string& prompt) {
  return {{"model", config.modelName},
          {"prompt", prompt},
          {"max_tokens", config.maxUnitTokens},
          {"top_p", config.topP},
          {"temperature", 0},
          {"stop", {" ", config.waitLiteral, config.eosLiteral}}};
}

Unit assembleUnit(std::string_view text, std::string_view finishReason, std::optional<std::string> stopReason,
                  const HttpBackendConfig& config, bool suppressWait) {
  std::size_t start = 0;
  while (start < text.size() && isSpaceChar(text[start])) ++start;
  std::string_view rest = text.substr(start);
  if (suppressWait && !config.waitLiteral.empty()) {
    while (rest.substr(0, config.waitLiteral.size()) == config.waitLiteral) {
      rest.remove_prefix(config.waitLiteral.size());
      while (!rest.empty() && isSpaceChar(rest.front())) rest.remove_prefix(1);
    }
    if (rest.empty() && !text.empty()) return Unit::makeWait();
  }

  if (rest.substr(0, config.waitLiteral.size()) == config.waitLiteral && !config.waitLiteral.empty()) {
    return Unit::makeWait();
  }
  if (rest.empty()) {
    if (!text.empty()) throw MalformedResponse("completion contained only whitespace");
    if (stopReason && *stopReason == config.waitLiteral) return Unit::makeWait();
    if (stopReason && !stopReason->empty() && isSpaceChar(stopReason->front())) {
      throw MalformedResponse("space stop sequence matched before any word");
    }
    if (finishReason.empty() || isEosFinish(finishReason)) return Unit::makeEos();
    throw MalformedResponse("empty completion with finish reason '" + std::string(finishReason) + "'");
  }
  std::size_t end = 0;
  while (end < rest.size() && !isSpaceChar(rest[end])) ++end;
  std::string_view word = rest.substr(0, end);
  for (const auto& literal : {config.waitLiteral, config.eosLiteral}) {
    if (literal.empty()) continue;
    const auto at = word.find(literal);
    if (at != std::string_view::npos) word = word.substr(0, at);
  }
  if (word.empty()) {
    // The word began with the EOS literal.
    return Unit::makeEos();
  }
  return Unit::makeWord(std::string(word));
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  config_.validate();
  const auto scheme = config_.endpointUrl.find("://");
  if (scheme == std::string::npos) throw RangeError("endpoint URL needs a scheme: " + config_.endpointUrl);
  const auto slash = config_.endpointUrl.find('/', scheme + 3);
  scheme_host_port_ = config_.endpointUrl.substr(0, slash);
  path_ = slash == std::string::npos ? "/v1/completions" : config_.endpointUrl.substr(slash);
}

std::size_t HttpBackend::requestCount() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

nlohmann::json HttpBackend::post(const nlohmann::json& body) {
  httplib::Client client(scheme_host_port_);
  const auto seconds = config_.timeoutMs / 1000;
  const auto micros = (config_.timeoutMs % 1000) * 1000;
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);
  httplib::Headers headers;
  if (!config_.apiKeyEnv.empty()) {
    if (const char* key = std::getenv(config_.apiKeyEnv.c_str()); key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }
  const std::string payload = body.dump();
  std::string lastError;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    {
      std::lock_guard lock(mutex_);
      ++requests_;
    }
    auto result = client.Post(path_, headers, payload, "application/json");
    if (!result) {
      lastError = httplib::to_string(result.error());
      continue;
    }
    if (result->status != 200) {
      lastError = "HTTP " + std::to_string(result->status);
      continue;
    }
    try {
      return nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception& e) {
      throw MalformedResponse(std::string("response is not JSON: ") + e.what());
    }
  }
  throw BackendUnavailable(config_.endpointUrl + ": " + lastError + " after " + std::to_string(config_.retries) +
                           " retries");
}

Unit HttpBackend::nextUnit(const std::string& prompt, bool suppressWait) {
  std::string sent = prompt;
  if (config_.appendSpace && !sent.empty() && sent.back() != ' ') sent += ' ';
  auto body = completionRequest(config_, sent);
  // Without logit access WAIT is suppressed by letting generation run past
  // the literal and skipping it in the text.
  if (suppressWait) body["stop"] = {" ", config_.eosLiteral};

  const auto response = post(body);
  try {
    const auto& choice = response.contains("choices") ? response.at("choices").at(0) : response;
    const std::string text = choice.value("text", std::string());
    const std::string finish = choice.contains("finish_reason") && choice.at("finish_reason").is_string()
                                   ? choice.at("finish_reason").get<std::string>()
                                   : std::string();
    std::optional<std::string> stop;
    if (choice.contains("stop_reason") && choice.at("stop_reason").is_string()) {
      stop = choice.at("stop_reason").get<std::string>();
    }
    return assembleUnit(text, finish, stop, config_, suppressWait);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResponse(std::string("unexpected response shape: ") + e.what());
  }
}

}  // namespace simt
