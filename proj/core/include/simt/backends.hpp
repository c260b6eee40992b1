#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "simt/engine.hpp"

namespace simt {

struct HttpBackendConfig {
  /// Full URL of the completion endpoint, e.g. http://localhost:8000/v1/completions.
  std::string endpointUrl = "http://127.0.0.1:8000/v1/completions";
  std::string modelName;
  /// Name of the environment variable holding the bearer token; empty for none.
  std::string apiKeyEnv;
  double topP = 0.7;
  int maxUnitTokens = 12;
  std::string waitLiteral = "<WAIT>";
  std::string eosLiteral = "</s>";
  int timeoutMs = 30000;
  int retries = 2;
  /// Send prompts that end in a committed word with a trailing space so the
  /// space stop sequence cannot fire before the next word starts.
  bool appendSpace = true;

  /// Throws RangeError when retries < 0 or timeoutMs <= 0.
  void validate() const;
};

/// Completion request body: model, prompt, max_tokens, top_p, temperature 0
/// and stop sequences [" ", WAIT literal, EOS literal].
nlohmann::json completionRequest(const HttpBackendConfig& config, const std::string& prompt);

/// Reduces one completion response to a unit. Leading whitespace is skipped;
/// the WAIT literal maps to Wait; an empty text that ended with a stop or EOS
/// maps to Eos; otherwise the first whitespace-delimited word, cut before any
/// WAIT or EOS literal it contains. `stopReason` is the matched stop string
/// when the server reports it. With `suppressWait`, leading WAIT literals are
/// skipped and the word after them is used. Throws MalformedResponse for
/// whitespace-only text.
Unit assembleUnit(std::string_view text, std::string_view finishReason,
                  std::optional<std::string> stopReason, const HttpBackendConfig& config,
                  bool suppressWait = false);

/// Backend for JSON-over-HTTP completion servers (OpenAI-style
/// /v1/completions). Each call is a stateless request, so the backend is safe
/// for concurrent use.
class HttpBackend final : public TranslatorBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  Unit nextUnit(const std::string& prompt, bool suppressWait) override;
  bool concurrentSafe() const override { return true; }

  /// Requests issued so far, including retries.
  std::size_t requestCount() const;

 private:
  nlohmann::json post(const nlohmann::json& body);

  HttpBackendConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  mutable std::mutex mutex_;
  std::size_t requests_ = 0;
};

/// Lower-case hex SHA-256.
std::string sha256Hex(std::string_view data);

/// Records (prompt hash -> unit) pairs from an inner backend, or replays a
/// recording without one. The recording is JSON lines of
/// {"prompt_sha256", "suppress_wait", "unit"}.
class RecordReplayBackend final : public TranslatorBackend {
 public:
  /// Record mode: forwards to `inner` and appends new pairs to `path`.
  static RecordReplayBackend record(const std::filesystem::path& path, TranslatorBackend& inner);
  /// Replay mode: throws Error when the recording does not exist.
  static RecordReplayBackend replay(const std::filesystem::path& path);

  RecordReplayBackend(RecordReplayBackend&&) noexcept;
  ~RecordReplayBackend() override;

  /// Throws ReplayMiss in replay mode for unseen prompts.
  Unit nextUnit(const std::string& prompt, bool suppressWait) override;
  bool concurrentSafe() const override;

  std::size_t size() const;

 private:
  RecordReplayBackend(std::filesystem::path path, TranslatorBackend* inner);

  using Key = std::pair<std::string, bool>;

  std::filesystem::path path_;
  TranslatorBackend* inner_;
  std::map<Key, Unit> units_;
  mutable std::mutex mutex_;
};

}  // namespace simt
