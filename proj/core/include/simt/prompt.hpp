#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simt {

/// Default interpreter system message with the target language and WAIT
/// literal substituted.
std::string defaultSystemMessage(std::string_view targetLanguage = "German",
                                 std::string_view waitLiteral = "<WAIT>");

struct PromptConfig {
  std::string systemMessage = defaultSystemMessage();
  bool includeSystemMessage = true;
};

/// Everything up to and including "[/INST] ":
///
///     <s>[INST]\n<<SYS>>\n\n{system}\n<</SYS>>\nTranslate this text: {source} [/INST]
///
/// Without a system message the <<SYS>> block is omitted entirely.
std::string promptPrefix(const PromptConfig& config, std::span<const std::string> partialSource);

/// promptPrefix followed by the committed target words joined by spaces.
std::string buildPrompt(const PromptConfig& config, std::span<const std::string> partialSource,
                        std::span<const std::string> partialTarget);

/// Words joined by single spaces.
std::string joinWords(std::span<const std::string> words);

/// Splits on ASCII spaces, dropping empty pieces.
std::vector<std::string> splitWords(std::string_view text);

/// Recovers (partial source, partial target) from a prompt built by
/// buildPrompt. Returns false if the markers are missing.
bool parsePrompt(std::string_view prompt, std::vector<std::string>& partialSource,
                 std::vector<std::string>& partialTarget);

}  // namespace simt
