#include "simt/tokenizer.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <array>
#include <map>

#include "simt/error.hpp"

namespace simt {
namespace {

struct CodePoint {
  UChar32 value;
  std::size_t begin;  // byte offsets into the source string
  std::size_t end;
};

std::vector<CodePoint> decode(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t offset = 0;
  while (offset < length) {
    const int32_t begin = offset;
    UChar32 c = 0;
    U8_NEXT(bytes, offset, length, c);
    if (c < 0) c = 0xFFFD;
    out.push_back({c, static_cast<std::size_t>(begin), static_cast<std::size_t>(offset)});
  }
  return out;
}

bool isSpace(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

// Letters, digits and combining marks.
bool isWordish(UChar32 c) {
  if (u_isalnum(c)) return true;
  const auto mask = U_GET_GC_MASK(c);
  return (mask & U_GC_M_MASK) != 0;
}

bool isDigit(UChar32 c) { return u_isdigit(c) != 0; }

bool isSplitting(UChar32 c) {
  if (c == '_') return false;
  if (u_ispunct(c)) return true;
  const auto type = u_charType(c);
  return type == U_CURRENCY_SYMBOL || type == U_MATH_SYMBOL || type == U_MODIFIER_SYMBOL;
}

// Kept inside a word when flanked by letters or digits.
bool isAlnumInfix(UChar32 c) {
  switch (c) {
    case '.':
    case '\'':
    case 0x2019:  // ’
    case '-':
    case 0x2010:  // ‐
    case '/':
    case '&':
      return true;
    default:
      return false;
  }
}

// Kept inside a word when flanked by digits.
bool isDigitInfix(UChar32 c) { return c == ',' || c == ':'; }

bool isRunChar(UChar32 c) { return c == '.' || c == '-'; }

bool asciiEqualsIgnoreCase(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto x = static_cast<unsigned char>(a[i]);
    auto y = static_cast<unsigned char>(b[i]);
    if (x < 0x80) x = static_cast<unsigned char>(std::tolower(x));
    if (y < 0x80) y = static_cast<unsigned char>(std::tolower(y));
    if (x != y) return false;
  }
  return true;
}

constexpr std::array<std::string_view, 14> kClitics = {
    "n't", "n’t", "'s", "’s", "'re", "’re", "'ve",
    "’ve", "'ll", "’ll", "'d", "’d", "'m", "’m"};

// Length in bytes of a clitic suffix of `word` that leaves a non-empty stem,
// or 0.
std::size_t cliticSuffix(std::string_view word) {
  for (auto clitic : kClitics) {
    if (word.size() <= clitic.size()) continue;
    if (asciiEqualsIgnoreCase(word.substr(word.size() - clitic.size()), clitic)) {
      return clitic.size();
    }
  }
  return 0;
}

bool isClitic(std::string_view word) {
  return std::any_of(kClitics.begin(), kClitics.end(),
                     [&](std::string_view c) { return asciiEqualsIgnoreCase(word, c); });
}

void emitWord(std::string word, std::vector<std::string>& out) {
  if (word.empty()) return;
  std::vector<std::string> clitics;
  while (auto n = cliticSuffix(word)) {
    clitics.push_back(word.substr(word.size() - n));
    word.resize(word.size() - n);
  }
  out.push_back(std::move(word));
  for (auto it = clitics.rbegin(); it != clitics.rend(); ++it) out.push_back(std::move(*it));
}

void splitChunk(std::string_view text, const std::vector<CodePoint>& cps, std::size_t first,
                std::size_t last, std::vector<std::string>& out) {
  std::string current;
  auto slice = [&](std::size_t from, std::size_t to) {
    return std::string(text.substr(cps[from].begin, cps[to - 1].end - cps[from].begin));
  };
  for (std::size_t p = first; p < last; ++p) {
    const UChar32 c = cps[p].value;
    if (!isSplitting(c)) {
      current += slice(p, p + 1);
      continue;
    }
    const bool hasPrev = p > first;
    const bool hasNext = p + 1 < last;
    const UChar32 prev = hasPrev ? cps[p - 1].value : 0;
    const UChar32 next = hasNext ? cps[p + 1].value : 0;
    if (isAlnumInfix(c) && hasPrev && hasNext && isWordish(prev) && isWordish(next)) {
      current += slice(p, p + 1);
      continue;
    }
    if (isDigitInfix(c) && hasPrev && hasNext && isDigit(prev) && isDigit(next)) {
      current += slice(p, p + 1);
      continue;
    }
    emitWord(std::move(current), out);
    current.clear();
    std::size_t runEnd = p + 1;
    if (isRunChar(c)) {
      while (runEnd < last && cps[runEnd].value == c) ++runEnd;
    }
    out.push_back(slice(p, runEnd));
    p = runEnd - 1;
  }
  emitWord(std::move(current), out);
}

const std::map<std::string, int, std::less<>>& detokenizeRoles() {
  // 1 closes (attaches left), 2 opens (next word attaches), 3 symmetric quote.
  static const std::map<std::string, int, std::less<>> roles = {
      {".", 1},      {",", 1},      {"!", 1},      {"?", 1},      {";", 1},
      {":", 1},      {")", 1},      {"]", 1},      {"}", 1},      {"…", 1},
      {"»", 1}, {"”", 1}, {"’", 1}, {"›", 1}, {"%", 1},
      {"(", 2},      {"[", 2},      {"{", 2},      {"«", 2}, {"„", 2},
      {"“", 2}, {"‘", 2}, {"¿", 2}, {"¡", 2}, {"‹", 2},
      {"\"", 3},     {"'", 3},
  };
  return roles;
}

bool isDotRun(std::string_view word) {
  return word.size() >= 2 && std::all_of(word.begin(), word.end(), [](char c) { return c == '.'; });
}

}  // namespace

std::string normalizeNfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  const auto source =
      icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString normalized = nfc->normalize(source, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

TokenizedSentence tokenize(std::string_view sentence) {
  TokenizedSentence result;
  result.original = std::string(sentence);
  const std::string text = normalizeNfc(sentence);
  const auto cps = decode(text);
  std::size_t p = 0;
  while (p < cps.size()) {
    while (p < cps.size() && isSpace(cps[p].value)) ++p;
    std::size_t end = p;
    while (end < cps.size() && !isSpace(cps[end].value)) ++end;
    if (end > p) {
      const auto chunk = std::string_view(text).substr(cps[p].begin, cps[end - 1].end - cps[p].begin);
      // A clitic already split off by an earlier pass stays whole.
      if (isClitic(chunk)) {
        result.words.emplace_back(chunk);
      } else {
        splitChunk(text, cps, p, end, result.words);
      }
    }
    p = end;
  }
  if (result.words.empty()) throw EmptySentence();
  return result;
}

std::string detokenize(std::span<const std::string> words) {
  const auto& roles = detokenizeRoles();
  std::string out;
  bool attachNext = false;
  std::map<std::string, bool, std::less<>> quoteOpen;
  for (const auto& word : words) {
    bool noSpace = out.empty() || attachNext;
    attachNext = false;
    const auto role = roles.find(word);
    if (role != roles.end() && role->second == 3) {
      bool& open = quoteOpen[word];
      if (open) {
        noSpace = true;
      } else {
        attachNext = true;
      }
      open = !open;
    } else if ((role != roles.end() && role->second == 1) || isDotRun(word) || isClitic(word)) {
      noSpace = true;
    } else if (role != roles.end() && role->second == 2) {
      attachNext = true;
    }
    if (!noSpace) out += ' ';
    out += word;
  }
  return out;
}

std::string normalizeWhitespace(std::string_view text) {
  std::string out;
  const auto cps = decode(text);
  bool pendingSpace = false;
  for (const auto& cp : cps) {
    if (isSpace(cp.value)) {
      pendingSpace = !out.empty();
      continue;
    }
    if (pendingSpace) out += ' ';
    pendingSpace = false;
    out.append(text.substr(cp.begin, cp.end - cp.begin));
  }
  return out;
}

}  // namespace simt
