#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simt/error.hpp"
#include "simt/prompt.hpp"
#include "simt/source_stream.hpp"

namespace simt {

enum class UnitKind { Word, Wait, Eos };

/// What a backend produces per call: one whole word, a WAIT, or end of
/// sequence.
struct Unit {
  UnitKind kind = UnitKind::Eos;
  std::string word;

  static Unit makeWord(std::string w) { return {UnitKind::Word, std::move(w)}; }
  static Unit makeWait() { return {UnitKind::Wait, {}}; }
  static Unit makeEos() { return {UnitKind::Eos, {}}; }

  bool operator==(const Unit&) const = default;
};

inline constexpr std::string_view kEosLiteral = "<EOS>";

/// "<WAIT>", "<EOS>", or the word itself.
std::string toString(const Unit& unit, std::string_view waitLiteral = "<WAIT>");
Unit unitFromString(std::string_view text, std::string_view waitLiteral = "<WAIT>");

/// A translator producing one unit per call from the full prompt.
class TranslatorBackend {
 public:
  virtual ~TranslatorBackend() = default;

  /// `suppressWait` is set once the whole source is in the prompt; backends
  /// that can should then avoid WAIT. A returned Word is non-empty and has no
  /// whitespace.
  virtual Unit nextUnit(const std::string& prompt, bool suppressWait) = 0;

  /// True if one instance may serve several sessions concurrently.
  virtual bool concurrentSafe() const { return false; }
};

enum class EventType { Read, Write, Wait, Eos };

std::string toString(EventType type);

struct SessionEvent {
  EventType type = EventType::Read;
  std::string word;            // READ: source word, WRITE: target word
  std::size_t revealed = 0;    // source words in the prompt after the event
  std::int64_t clock = 0;      // stream clock of the latest revealed word
  std::optional<double> delay;  // WRITE only: g(t) in the session's delay unit
  bool suppressed = false;     // WAIT returned after the source was exhausted
  std::optional<double> wallMs;

  bool operator==(const SessionEvent&) const = default;
};

/// Full record of one session; feeds the latency metrics.
struct SessionTrace {
  std::string id;
  StreamMode mode = StreamMode::Text;
  std::size_t k = 1;
  std::vector<std::string> sourceWords;
  std::int64_t sourceExtent = 0;  // |x| in words, or total audio ms
  std::vector<std::string> hypothesisWords;
  std::vector<double> delaysWords;  // source words revealed at each WRITE
  std::vector<double> delaysMs;     // speech mode: audio ms consumed at each WRITE
  std::vector<SessionEvent> events;
  std::optional<double> processingMs;
  std::optional<std::string> reference;
  std::optional<std::string> error;

  /// Delays in the unit matching `mode`.
  const std::vector<double>& delays() const { return mode == StreamMode::Speech ? delaysMs : delaysWords; }
  bool operator==(const SessionTrace&) const = default;
};

struct SessionConfig {
  std::size_t k = 1;
  PromptConfig prompt;
  std::string waitLiteral = "<WAIT>";
  /// Consecutive WAITs tolerated after the source is exhausted.
  int maxSuppressedWaits = 3;
  /// Cap on committed words; 0 means 4 * source words + 16.
  std::size_t maxHypothesisWords = 0;
  bool recordWallClock = false;
};

/// Session failure; carries the trace up to the failing step.
class SessionError : public Error {
 public:
  SessionError(const std::string& what, SessionTrace partial)
      : Error(what), partial_(std::move(partial)) {}
  const SessionTrace& partial() const noexcept { return partial_; }

 private:
  SessionTrace partial_;
};

class WaitOverflow : public SessionError {
 public:
  using SessionError::SessionError;
};

/// Runs the wait-k gated READ/WRITE loop: reveal the first k source words,
/// then repeatedly prompt the backend. A word is committed and one more
/// source word is revealed; a WAIT reveals one more source word only; EOS
/// ends the session. Once the source is exhausted reveals are no-ops, WAITs
/// are discarded and the backend is re-asked with WAIT suppressed.
///
/// Throws RangeError (k == 0), WaitOverflow, SessionError.
SessionTrace runSession(WordSource& source, TranslatorBackend& backend, const SessionConfig& config);

}  // namespace simt
