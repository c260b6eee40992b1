#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>

#include "simt/backends.hpp"
#include "simt/mock_backends.hpp"
#include "test_support.hpp"

using namespace simt;
using nlohmann::json;

namespace {

/// Completion server on an ephemeral local port.
class FakeServer {
 public:
  using Handler = std::function<json(const json& request, int hit)>;

  explicit FakeServer(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/v1/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const int hit = hits_++;
      lastAuthorization = req.get_header_value("Authorization");
      const auto request = json::parse(req.body);
      lastRequest = request;
      const auto reply = handler_(request, hit);
      if (reply.is_number_integer()) {
        res.status = reply.get<int>();
        return;
      }
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/completions"; }
  int hits() const { return hits_; }

  json lastRequest;
  std::string lastAuthorization;

 private:
  Handler handler_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
};

json completion(const std::string& text, const std::string& finish = "stop",
                std::optional<std::string> stop = std::nullopt) {
  json choice{{"text", text}, {"finish_reason", finish}};
  if (stop) choice["stop_reason"] = *stop;
  return {{"choices", json::array({choice})}};
}

HttpBackendConfig configFor(const FakeServer& server) {
  HttpBackendConfig c;
  c.endpointUrl = server.url();
  c.modelName = "test-model";
  c.timeoutMs = 2000;
  return c;
}

}  // namespace

TEST(AssembleUnit, WordsWaitsAndEos) {
  const HttpBackendConfig c;
  EXPECT_EQ(assembleUnit("Ya", "stop", " ", c), Unit::makeWord("Ya"));
  EXPECT_EQ(assembleUnit(" Ya", "length", std::nullopt, c), Unit::makeWord("Ya"));
  EXPECT_EQ(assembleUnit("Ya lyublyu", "length", std::nullopt, c), Unit::makeWord("Ya"));
  EXPECT_EQ(assembleUnit("<WAIT>", "stop", std::nullopt, c), Unit::makeWait());
  EXPECT_EQ(assembleUnit("", "stop", std::string("<WAIT>"), c), Unit::makeWait());
  EXPECT_EQ(assembleUnit("", "stop", std::string("</s>"), c), Unit::makeEos());
  EXPECT_EQ(assembleUnit("", "stop", std::nullopt, c), Unit::makeEos());
  EXPECT_EQ(assembleUnit("utram.</s>", "stop", std::nullopt, c), Unit::makeWord("utram."));
  EXPECT_EQ(assembleUnit("po<WAIT>", "stop", std::nullopt, c), Unit::makeWord("po"));
  EXPECT_EQ(assembleUnit("</s>", "stop", std::nullopt, c), Unit::makeEos());
}

TEST(AssembleUnit, MalformedResponses) {
  const HttpBackendConfig c;
  EXPECT_THROW(assembleUnit("   ", "stop", std::nullopt, c), MalformedResponse);
  EXPECT_THROW(assembleUnit("", "stop", std::string(" "), c), MalformedResponse);
  EXPECT_THROW(assembleUnit("", "content_filter", std::nullopt, c), MalformedResponse);
}

TEST(AssembleUnit, SuppressedWaitSkipsLiteral) {
  const HttpBackendConfig c;
  EXPECT_EQ(assembleUnit("<WAIT> chai", "stop", std::nullopt, c, true), Unit::makeWord("chai"));
  EXPECT_EQ(assembleUnit("<WAIT><WAIT>", "length", std::nullopt, c, true), Unit::makeWait());
}

TEST(CompletionRequest, Shape) {
  HttpBackendConfig c;
  c.modelName = "m";
  const auto body = completionRequest(c, "p");
  EXPECT_EQ(body.at("model"), "m");
  EXPECT_EQ(body.at("prompt"), "p");
  EXPECT_DOUBLE_EQ(body.at("top_p").get<double>(), 0.7);
  EXPECT_EQ(body.at("temperature"), 0);
  EXPECT_EQ(body.at("stop"), json::array({" ", "<WAIT>", "</s>"}));
}

TEST(HttpBackend, RoundTripsUnits) {
  FakeServer server([](const json& req, int) {
    const auto prompt = req.at("prompt").get<std::string>();
    if (prompt.find("[/INST] ") + 8 == prompt.size()) return completion("", "stop", std::string("<WAIT>"));
    return completion("Ya", "stop", std::string(" "));
  });
  HttpBackend backend(configFor(server));
  EXPECT_EQ(backend.nextUnit("Translate this text: I [/INST] ", false), Unit::makeWait());
  EXPECT_EQ(backend.nextUnit("Translate this text: I like [/INST] x", false), Unit::makeWord("Ya"));
  EXPECT_EQ(server.lastRequest.at("prompt"), "Translate this text: I like [/INST] x ");
  EXPECT_EQ(server.lastRequest.at("model"), "test-model");
  EXPECT_EQ(backend.requestCount(), 2u);
  EXPECT_TRUE(backend.concurrentSafe());
}

TEST(HttpBackend, SuppressedRequestDropsWaitStop) {
  FakeServer server([](const json&, int) { return completion("<WAIT> chai", "stop", std::string(" ")); });
  HttpBackend backend(configFor(server));
  EXPECT_EQ(backend.nextUnit("p", true), Unit::makeWord("chai"));
  EXPECT_EQ(server.lastRequest.at("stop"), json::array({" ", "</s>"}));
}

TEST(HttpBackend, RetriesThenSucceeds) {
  FakeServer server([](const json&, int hit) { return hit < 2 ? json(503) : completion("ok"); });
  auto config = configFor(server);
  config.retries = 2;
  HttpBackend backend(config);
  EXPECT_EQ(backend.nextUnit("p", false), Unit::makeWord("ok"));
  EXPECT_EQ(server.hits(), 3);
}

TEST(HttpBackend, GivesUpAfterRetries) {
  FakeServer server([](const json&, int) { return json(500); });
  auto config = configFor(server);
  config.retries = 1;
  HttpBackend backend(config);
  EXPECT_THROW(backend.nextUnit("p", false), BackendUnavailable);
  EXPECT_EQ(server.hits(), 2);
}

TEST(HttpBackend, UnreachableEndpoint) {
  HttpBackendConfig config;
  config.endpointUrl = "http://127.0.0.1:1/v1/completions";
  config.retries = 0;
  config.timeoutMs = 500;
  HttpBackend backend(config);
  EXPECT_THROW(backend.nextUnit("p", false), BackendUnavailable);
}

TEST(HttpBackend, MalformedBody) {
  FakeServer server([](const json&, int) { return json{{"choices", json::array({json{{"text", "  "}}})}}; });
  HttpBackend backend(configFor(server));
  EXPECT_THROW(backend.nextUnit("p", false), MalformedResponse);
}

TEST(HttpBackend, SendsBearerTokenFromNamedVariable) {
  FakeServer server([](const json&, int) { return completion("x"); });
  ::setenv("SIMT_TEST_TOKEN", "sekret", 1);
  auto config = configFor(server);
  config.apiKeyEnv = "SIMT_TEST_TOKEN";
  HttpBackend backend(config);
  backend.nextUnit("p", false);
  EXPECT_EQ(server.lastAuthorization, "Bearer sekret");
}

TEST(HttpBackend, ValidatesConfig) {
  HttpBackendConfig config;
  config.retries = -1;
  EXPECT_THROW(HttpBackend{config}, RangeError);
  config.retries = 0;
  config.endpointUrl = "localhost:80";
  EXPECT_THROW(HttpBackend{config}, RangeError);
}

TEST(RecordReplay, ReplaysRecordedUnits) {
  testkit::TempDir dir("replay");
  const auto path = dir / "rec.jsonl";
  DictionaryBackend inner(Dictionary{{"a", {"x", 0}}, {"b", {"y", 1}}});
  const std::vector<std::pair<std::string, bool>> prompts{
      {"Translate this text: a [/INST] ", false},
      {"Translate this text: b [/INST] ", false},
      {"Translate this text: a b [/INST] x", true}};
  std::vector<Unit> recorded;
  {
    auto recorder = RecordReplayBackend::record(path, inner);
    for (const auto& [p, s] : prompts) recorded.push_back(recorder.nextUnit(p, s));
    EXPECT_EQ(recorder.size(), 3u);
  }
  const auto bytes = testkit::readFile(path);
  {
    auto again = RecordReplayBackend::record(path, inner);
    for (const auto& [p, s] : prompts) again.nextUnit(p, s);
  }
  EXPECT_EQ(testkit::readFile(path), bytes);

  auto replay = RecordReplayBackend::replay(path);
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    EXPECT_EQ(replay.nextUnit(prompts[i].first, prompts[i].second), recorded[i]);
  }
  EXPECT_THROW(replay.nextUnit("Translate this text: zzz [/INST] ", false), ReplayMiss);
  EXPECT_THROW(replay.nextUnit(prompts[0].first, true), ReplayMiss);
  EXPECT_TRUE(replay.concurrentSafe());
  EXPECT_THROW(RecordReplayBackend::replay(dir / "missing.jsonl"), Error);
}

TEST(RecordReplay, Sha256KnownVector) {
  EXPECT_EQ(sha256Hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Dictionary, LoadsTsv) {
  testkit::TempDir dir("dict");
  testkit::writeFile(dir / "d.tsv", "# comment\na\tx\nb\ty\t2\n\n");
  const auto d = loadDictionary(dir / "d.tsv");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.at("a").translation, "x");
  EXPECT_EQ(d.at("b").lookahead, 2u);
  testkit::writeFile(dir / "bad.tsv", "a\n");
  EXPECT_THROW(loadDictionary(dir / "bad.tsv"), ParseError);
}
