#include "simt/prompt.hpp"

namespace simt {
namespace {

constexpr std::string_view kSourceMarker = "Translate this text: ";
constexpr std::string_view kInstEnd = " [/INST] ";

}  // namespace

std::string defaultSystemMessage(std::string_view targetLanguage, std::string_view waitLiteral) {
  std::string msg = "You are a professional conference interpreter. Given an English text you translate it into ";
  msg += targetLanguage;
  msg +=
      " as accurately and as concisely as possible, NEVER adding comments of your own. You output "
      "translation when the information available in the source is unambiguous, otherwise you "
      "output the wait token (";
  msg += waitLiteral;
  msg += "), not flanked by anything else. It's important that you get this right.";
  return msg;
}

std::string joinWords(std::span<const std::string> words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::vector<std::string> splitWords(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto next = text.find(' ', pos);
    const auto end = next == std::string_view::npos ? text.size() : next;
    if (end > pos) out.emplace_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

std::string promptPrefix(const PromptConfig& config, std::span<const std::string> partialSource) {
  std::string out = "<s>[INST]\n";
  if (config.includeSystemMessage) {
    out += "<<SYS>>\n\n";
    out += config.systemMessage;
    out += "\n<</SYS>>\n";
  }
  out += kSourceMarker;
  out += joinWords(partialSource);
  out += kInstEnd;
  return out;
}

std::string buildPrompt(const PromptConfig& config, std::span<const std::string> partialSource,
                        std::span<const std::string> partialTarget) {
  return promptPrefix(config, partialSource) + joinWords(partialTarget);
}

bool parsePrompt(std::string_view prompt, std::vector<std::string>& partialSource,
                 std::vector<std::string>& partialTarget) {
  const auto sourceStart = prompt.rfind(kSourceMarker);
  if (sourceStart == std::string_view::npos) return false;
  const auto from = sourceStart + kSourceMarker.size();
  const auto instEnd = prompt.find(kInstEnd, from);
  if (instEnd == std::string_view::npos) return false;
  partialSource = splitWords(prompt.substr(from, instEnd - from));
  partialTarget = splitWords(prompt.substr(instEnd + kInstEnd.size()));
  return true;
}

}  // namespace simt
