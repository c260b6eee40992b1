#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "simt/engine.hpp"

namespace simt {

/// Replays a fixed unit sequence, ignoring the prompt. Throws ScriptUnderrun
/// when asked for more units than the script holds.
class ScriptedBackend final : public TranslatorBackend {
 public:
  explicit ScriptedBackend(std::vector<Unit> script);

  Unit nextUnit(const std::string& prompt, bool suppressWait) override;
  std::size_t consumed() const { return position_; }

 private:
  std::vector<Unit> script_;
  std::size_t position_ = 0;
};

struct DictionaryEntry {
  std::string translation;
  /// Source words beyond the current one that must be visible before the
  /// translation is written.
  std::size_t lookahead = 0;
};

using Dictionary = std::map<std::string, DictionaryEntry, std::less<>>;

/// Word-for-word translator. The t-th committed word translates the t-th
/// source word; unknown words are copied through with `defaultLookahead`.
/// Emits WAIT while source word t + lookahead is not yet in the prompt, and
/// EOS once every revealed word is translated and WAIT is suppressed.
/// Stateless, so one instance can serve concurrent sessions.
class DictionaryBackend final : public TranslatorBackend {
 public:
  explicit DictionaryBackend(Dictionary dictionary, std::size_t defaultLookahead = 0);

  Unit nextUnit(const std::string& prompt, bool suppressWait) override;
  bool concurrentSafe() const override { return true; }

  /// Translation the backend would produce for a full sentence.
  std::vector<std::string> translate(const std::vector<std::string>& source) const;

 private:
  DictionaryEntry lookup(const std::string& word) const;

  Dictionary dictionary_;
  std::size_t defaultLookahead_;
};

/// Loads "source<TAB>translation[<TAB>lookahead]" lines; '#' starts a comment.
Dictionary loadDictionary(const std::filesystem::path& path);

}  // namespace simt
