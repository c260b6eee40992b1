#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "simt/tokenizer.hpp"

namespace simt {

enum class StreamMode { Text, Speech };

std::string toString(StreamMode mode);
StreamMode streamModeFromString(const std::string& text);

/// A source word together with the stream-clock time it became available:
/// its 1-based position in text mode, milliseconds of audio in speech mode.
struct StreamWord {
  std::string word;
  std::int64_t stamp = 0;

  bool operator==(const StreamWord&) const = default;
};

/// Pull-based, single-consumer source of words.
class WordSource {
 public:
  virtual ~WordSource() = default;

  /// Next word, or nullopt once the source is exhausted.
  virtual std::optional<StreamWord> next() = 0;
  virtual StreamMode mode() const = 0;
  /// Total words the stream will deliver.
  virtual std::size_t wordCount() const = 0;
  /// Source length in the delay unit: words (text) or audio ms (speech).
  virtual std::int64_t extent() const = 0;
};

/// Delivers the words of a sentence immediately, in order.
class TextStream final : public WordSource {
 public:
  explicit TextStream(std::vector<std::string> words);
  explicit TextStream(const TokenizedSentence& sentence) : TextStream(sentence.words) {}

  std::optional<StreamWord> next() override;
  StreamMode mode() const override { return StreamMode::Text; }
  std::size_t wordCount() const override { return words_.size(); }
  std::int64_t extent() const override { return static_cast<std::int64_t>(words_.size()); }

 private:
  std::vector<std::string> words_;
  std::size_t position_ = 0;
};

struct TimedWord {
  std::string word;
  std::int64_t endMs = 0;

  bool operator==(const TimedWord&) const = default;
};

/// Word-level transcript of an audio clip. End times strictly increase and
/// never exceed totalMs.
struct TimedTranscript {
  std::vector<TimedWord> words;
  std::int64_t totalMs = 0;
  std::string reference;

  /// Throws ParseError when the invariants do not hold.
  void validate() const;
};

/// {"words": [{"w", "end_ms"}], "total_ms", "reference"}
TimedTranscript transcriptFromJson(const nlohmann::json& json);
nlohmann::json toJson(const TimedTranscript& transcript);
TimedTranscript loadTranscript(const std::filesystem::path& path);

struct AsrSimConfig {
  std::int64_t windowMs = 200;
  bool dropLastWord = true;
};

/// Simulated incremental ASR over a timed transcript. Audio arrives in
/// windowMs chunks; at tick t the recognizer sees every word whose audio has
/// ended by t and, unless all audio has arrived (t >= totalMs), withholds the
/// last of them because it may be clipped. Each word is delivered once,
/// stamped with the tick at which it was first exposed.
class AsrSimStream final : public WordSource {
 public:
  AsrSimStream(TimedTranscript transcript, AsrSimConfig config = {});

  std::optional<StreamWord> next() override;
  StreamMode mode() const override { return StreamMode::Speech; }
  std::size_t wordCount() const override { return transcript_.words.size(); }
  std::int64_t extent() const override { return transcript_.totalMs; }

  /// Current virtual clock, a multiple of windowMs.
  std::int64_t tick() const { return tick_; }

 private:
  std::size_t exposedAt(std::int64_t tick) const;

  TimedTranscript transcript_;
  AsrSimConfig config_;
  std::int64_t tick_ = 0;
  std::size_t exposed_ = 0;
  std::size_t delivered_ = 0;
};

}  // namespace simt
