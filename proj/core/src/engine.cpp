#include "simt/engine.hpp"

#include <algorithm>
#include <chrono>

namespace simt {

std::string toString(const Unit& unit, std::string_view waitLiteral) {
  switch (unit.kind) {
    case UnitKind::Wait:
      return std::string(waitLiteral);
    case UnitKind::Eos:
      return std::string(kEosLiteral);
    case UnitKind::Word:
      break;
  }
  return unit.word;
}

Unit unitFromString(std::string_view text, std::string_view waitLiteral) {
  if (text == waitLiteral) return Unit::makeWait();
  if (text == kEosLiteral) return Unit::makeEos();
  return Unit::makeWord(std::string(text));
}

std::string toString(EventType type) {
  switch (type) {
    case EventType::Read:
      return "READ";
    case EventType::Write:
      return "WRITE";
    case EventType::Wait:
      return "WAIT";
    case EventType::Eos:
      return "EOS";
  }
  return "?";
}

namespace {

SessionEvent makeEvent(EventType type, std::string word = {}) {
  SessionEvent event;
  event.type = type;
  event.word = std::move(word);
  return event;
}

bool hasWhitespace(std::string_view word) {
  return std::any_of(word.begin(), word.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  });
}

class Session {
 public:
  Session(WordSource& source, TranslatorBackend& backend, const SessionConfig& config)
      : source_(source), backend_(backend), config_(config), start_(std::chrono::steady_clock::now()) {
    trace_.mode = source.mode();
    trace_.k = config.k;
    trace_.sourceExtent = source.extent();
  }

  SessionTrace run() {
    for (std::size_t i = 0; i < config_.k; ++i) {
      if (!reveal()) break;
    }
    const std::size_t cap = config_.maxHypothesisWords ? config_.maxHypothesisWords
                                                       : 4 * source_.wordCount() + 16;
    int suppressedRun = 0;
    while (true) {
      const bool exhausted = revealed() >= source_.wordCount();
      const std::string prompt = buildPrompt(config_.prompt, trace_.sourceWords, trace_.hypothesisWords);
      Unit unit;
      try {
        unit = backend_.nextUnit(prompt, exhausted);
      } catch (const Error& e) {
        fail<SessionError>(e.what());
      }
      if (unit.kind == UnitKind::Word && unit.word == config_.waitLiteral) unit = Unit::makeWait();

      if (unit.kind == UnitKind::Eos) {
        push(makeEvent(EventType::Eos));
        break;
      }
      if (unit.kind == UnitKind::Wait) {
        auto event = makeEvent(EventType::Wait);
        event.suppressed = exhausted;
        push(std::move(event));
        if (!exhausted) {
          reveal();
          continue;
        }
        if (++suppressedRun >= config_.maxSuppressedWaits) {
          fail<WaitOverflow>("backend kept emitting WAIT after the source was exhausted");
        }
        continue;
      }

      if (unit.word.empty() || hasWhitespace(unit.word)) {
        fail<SessionError>("backend returned an invalid word '" + unit.word + "'");
      }
      if (revealed() < config_.k && !exhausted) {
        fail<SessionError>("WRITE attempted before the wait-k gate opened");
      }
      suppressedRun = 0;
      commit(std::move(unit.word));
      if (trace_.hypothesisWords.size() > cap) {
        fail<SessionError>("hypothesis exceeded " + std::to_string(cap) + " words without EOS");
      }
      reveal();
    }
    finish();
    return std::move(trace_);
  }

 private:
  std::size_t revealed() const { return trace_.sourceWords.size(); }

  bool reveal() {
    auto word = source_.next();
    if (!word) return false;
    lastStamp_ = word->stamp;
    trace_.sourceWords.push_back(word->word);
    push(makeEvent(EventType::Read, std::move(word->word)));
    return true;
  }

  void commit(std::string word) {
    const double byWords = static_cast<double>(revealed());
    trace_.delaysWords.push_back(byWords);
    double delay = byWords;
    if (trace_.mode == StreamMode::Speech) {
      delay = static_cast<double>(std::min(lastStamp_, trace_.sourceExtent));
      trace_.delaysMs.push_back(delay);
    }
    trace_.hypothesisWords.push_back(word);
    auto event = makeEvent(EventType::Write, std::move(word));
    event.delay = delay;
    push(std::move(event));
  }

  void push(SessionEvent event) {
    event.revealed = revealed();
    event.clock = lastStamp_;
    if (config_.recordWallClock) event.wallMs = elapsedMs();
    trace_.events.push_back(std::move(event));
  }

  double elapsedMs() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

  void finish() {
    if (config_.recordWallClock) trace_.processingMs = elapsedMs();
  }

  template <typename E>
  [[noreturn]] void fail(const std::string& what) {
    finish();
    trace_.error = what;
    throw E(what, std::move(trace_));
  }

  WordSource& source_;
  TranslatorBackend& backend_;
  const SessionConfig& config_;
  std::chrono::steady_clock::time_point start_;
  SessionTrace trace_;
  std::int64_t lastStamp_ = 0;
};

}  // namespace

SessionTrace runSession(WordSource& source, TranslatorBackend& backend, const SessionConfig& config) {
  if (config.k == 0) throw RangeError("k must be >= 1");
  if (config.maxSuppressedWaits < 1) throw RangeError("maxSuppressedWaits must be >= 1");
  SessionTrace trace = Session(source, backend, config).run();
  // Record any words the session never read so the trace holds the whole source.
  while (auto word = source.next()) trace.sourceWords.push_back(std::move(word->word));
  return trace;
}

}  // namespace simt
