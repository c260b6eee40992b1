#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simt {

/// Words of one sentence. Punctuation marks are standalone words.
struct TokenizedSentence {
  std::vector<std::string> words;
  std::string original;

  bool operator==(const TokenizedSentence&) const = default;
};

/// NFC-normalizes UTF-8 text. Invalid sequences are replaced with U+FFFD.
std::string normalizeNfc(std::string_view text);

/// Splits a sentence into words using the fixed rule table:
///
///  - whitespace separates words;
///  - punctuation and symbol characters (Unicode P*, Sc, Sm, Sk) are words of
///    their own, except for the in-word cases below;
///  - `.` `'` `’` `-` `‐` `/` `&` stay inside a word when both neighbours are
///    letters or digits (3.14, l'homme, well-known, and/or);
///  - `,` and `:` stay inside a word when both neighbours are digits
///    (1,000  10:30);
///  - runs of two or more `.` or `-` form one word (`...`, `--`);
///  - English clitics split off the end of a word: n't 's 're 've 'll 'd 'm
///    (either apostrophe, any case), so "don't" becomes "do" "n't".
///
/// The same table is used for every language. Throws EmptySentence when the
/// input has no non-whitespace characters.
TokenizedSentence tokenize(std::string_view sentence);

/// Inverse of tokenize for rule-conformant word lists: joins with single
/// spaces, attaches closing punctuation and clitics to the left, opening
/// brackets and quotes to the right, and alternates `"` / `'` between opening
/// and closing.
std::string detokenize(std::span<const std::string> words);

/// Collapses every whitespace run to one space and trims both ends.
std::string normalizeWhitespace(std::string_view text);

}  // namespace simt
