#include "simt/source_stream.hpp"

#include <fstream>

#include "simt/error.hpp"

namespace simt {

std::string toString(StreamMode mode) { return mode == StreamMode::Text ? "text" : "speech"; }

StreamMode streamModeFromString(const std::string& text) {
  if (text == "text") return StreamMode::Text;
  if (text == "speech") return StreamMode::Speech;
  throw ParseError(0, "unknown mode '" + text + "' (expected text or speech)");
}

TextStream::TextStream(std::vector<std::string> words) : words_(std::move(words)) {}

std::optional<StreamWord> TextStream::next() {
  if (position_ >= words_.size()) return std::nullopt;
  ++position_;
  return StreamWord{words_[position_ - 1], static_cast<std::int64_t>(position_)};
}

void TimedTranscript::validate() const {
  std::int64_t previous = -1;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].word.empty()) throw ParseError(0, "transcript word " + std::to_string(i) + " is empty");
    if (words[i].endMs <= previous) {
      throw ParseError(0, "transcript end_ms must strictly increase (word " + std::to_string(i) + ")");
    }
    previous = words[i].endMs;
  }
  if (totalMs < 0 || (!words.empty() && totalMs < words.back().endMs)) {
    throw ParseError(0, "total_ms is smaller than the last word's end_ms");
  }
}

TimedTranscript transcriptFromJson(const nlohmann::json& json) {
  TimedTranscript t;
  try {
    for (const auto& w : json.at("words")) t.words.push_back({w.at("w").get<std::string>(), w.at("end_ms").get<std::int64_t>()});
    t.totalMs = json.at("total_ms").get<std::int64_t>();
    if (json.contains("reference")) t.reference = json.at("reference").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, e.what());
  }
  t.validate();
  return t;
}

nlohmann::json toJson(const TimedTranscript& transcript) {
  nlohmann::json words = nlohmann::json::array();
  for (const auto& w : transcript.words) words.push_back({{"w", w.word}, {"end_ms", w.endMs}});
  return {{"words", std::move(words)}, {"total_ms", transcript.totalMs}, {"reference", transcript.reference}};
}

TimedTranscript loadTranscript(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open transcript " + path.string());
  try {
    return transcriptFromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

AsrSimStream::AsrSimStream(TimedTranscript transcript, AsrSimConfig config)
    : transcript_(std::move(transcript)), config_(config) {
  if (config_.windowMs <= 0) throw RangeError("windowMs must be positive");
  transcript_.validate();
}

std::size_t AsrSimStream::exposedAt(std::int64_t tick) const {
  std::size_t visible = 0;
  while (visible < transcript_.words.size() && transcript_.words[visible].endMs <= tick) ++visible;
  if (tick >= transcript_.totalMs || !config_.dropLastWord) return visible;
  return visible == 0 ? 0 : visible - 1;
}

std::optional<StreamWord> AsrSimStream::next() {
  const auto& words = transcript_.words;
  if (delivered_ >= words.size()) return std::nullopt;
  while (exposed_ <= delivered_) {
    tick_ += config_.windowMs;
    exposed_ = exposedAt(tick_);
  }
  return StreamWord{words[delivered_++].word, tick_};
}

}  // namespace simt
