#include "simt/trace_io.hpp"

#include <fstream>
#include <sstream>

namespace simt {
namespace {

EventType eventTypeFromString(const std::string& text) {
  if (text == "READ") return EventType::Read;
  if (text == "WRITE") return EventType::Write;
  if (text == "WAIT") return EventType::Wait;
  if (text == "EOS") return EventType::Eos;
  throw ParseError(0, "unknown event type '" + text + "'");
}

nlohmann::json eventJson(const SessionEvent& e) {
  nlohmann::json j;
  j["type"] = toString(e.type);
  if (!e.word.empty()) j["word"] = e.word;
  j["revealed"] = e.revealed;
  j["clock"] = e.clock;
  if (e.delay) j["delay"] = *e.delay;
  if (e.suppressed) j["suppressed"] = true;
  if (e.wallMs) j["wall_ms"] = *e.wallMs;
  return j;
}

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(0, std::string("trace is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(0, std::string("trace field '") + key + "' has the wrong type");
  }
}

template <typename T>
std::optional<T> optionalField(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return field<T>(j, key);
}

}  // namespace

nlohmann::json toJson(const SessionTrace& trace) {
  nlohmann::json j;
  j["id"] = trace.id;
  j["mode"] = toString(trace.mode);
  j["k"] = trace.k;
  j["source"] = trace.sourceWords;
  j["source_extent"] = trace.sourceExtent;
  j["hypothesis"] = trace.hypothesisWords;
  j["delays_words"] = trace.delaysWords;
  if (trace.mode == StreamMode::Speech) j["delays_ms"] = trace.delaysMs;
  auto events = nlohmann::json::array();
  for (const auto& e : trace.events) events.push_back(eventJson(e));
  j["events"] = std::move(events);
  j["reference"] = trace.reference ? nlohmann::json(*trace.reference) : nlohmann::json(nullptr);
  nlohmann::json stamps;
  stamps["clock_unit"] = trace.mode == StreamMode::Speech ? "ms" : "words";
  if (trace.processingMs) stamps["processing_ms"] = *trace.processingMs;
  j["timestamps"] = std::move(stamps);
  j["error"] = trace.error ? nlohmann::json(*trace.error) : nlohmann::json(nullptr);
  return j;
}

SessionTrace traceFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError(0, "trace must be a JSON object");
  SessionTrace t;
  t.id = field<std::string>(j, "id");
  try {
    t.mode = streamModeFromString(field<std::string>(j, "mode"));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
  t.k = field<std::size_t>(j, "k");
  t.sourceWords = field<std::vector<std::string>>(j, "source");
  t.sourceExtent = field<std::int64_t>(j, "source_extent");
  t.hypothesisWords = field<std::vector<std::string>>(j, "hypothesis");
  t.delaysWords = field<std::vector<double>>(j, "delays_words");
  if (t.mode == StreamMode::Speech) t.delaysMs = field<std::vector<double>>(j, "delays_ms");
  for (const auto& ej : field<nlohmann::json>(j, "events")) {
    SessionEvent e;
    e.type = eventTypeFromString(field<std::string>(ej, "type"));
    e.word = optionalField<std::string>(ej, "word").value_or("");
    e.revealed = field<std::size_t>(ej, "revealed");
    e.clock = field<std::int64_t>(ej, "clock");
    e.delay = optionalField<double>(ej, "delay");
    e.suppressed = optionalField<bool>(ej, "suppressed").value_or(false);
    e.wallMs = optionalField<double>(ej, "wall_ms");
    t.events.push_back(std::move(e));
  }
  t.reference = optionalField<std::string>(j, "reference");
  if (j.contains("timestamps")) t.processingMs = optionalField<double>(j.at("timestamps"), "processing_ms");
  t.error = optionalField<std::string>(j, "error");
  if (t.hypothesisWords.size() != t.delays().size()) throw ParseError(0, "hypothesis and delays differ in length");
  return t;
}

void writeTrace(const std::filesystem::path& path, const SessionTrace& trace) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << toJson(trace).dump(2) << '\n';
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

SessionTrace readTrace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
  return traceFromJson(j);
}

}  // namespace simt
