#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <random>

#include "simt/error.hpp"
#include "simt/tokenizer.hpp"
#include "test_support.hpp"

using simt::detokenize;
using simt::tokenize;
using Words = std::vector<std::string>;

TEST(Tokenizer, SplitsSentenceFinalPeriod) {
  EXPECT_EQ(tokenize("I like tea.").words, (Words{"I", "like", "tea", "."}));
}

TEST(Tokenizer, SplitsCommaAndPeriod) { EXPECT_EQ(tokenize("Ja, gut.").words, (Words{"Ja", ",", "gut", "."})); }

TEST(Tokenizer, SplitsNegationClitic) { EXPECT_EQ(tokenize("don't stop").words, (Words{"do", "n't", "stop"})); }

TEST(Tokenizer, KeepsOriginal) { EXPECT_EQ(tokenize("  I like tea. ").original, "  I like tea. "); }

TEST(Tokenizer, EmptyAfterTrimThrows) {
  EXPECT_THROW(tokenize(""), simt::EmptySentence);
  EXPECT_THROW(tokenize(" \t\n "), simt::EmptySentence);
}

TEST(Tokenizer, KeepsDecimalsAndThousands) {
  EXPECT_EQ(tokenize("It costs 3.14 or 1,000 at 10:30.").words,
            (Words{"It", "costs", "3.14", "or", "1,000", "at", "10:30", "."}));
}

TEST(Tokenizer, KeepsInWordApostropheAndHyphen) {
  EXPECT_EQ(tokenize("l'homme well-known and/or").words, (Words{"l'homme", "well-known", "and/or"}));
}

TEST(Tokenizer, SplitsBracketsQuotesAndSymbols) {
  EXPECT_EQ(tokenize("(\"Yes!\") 50% $5").words,
            (Words{"(", "\"", "Yes", "!", "\"", ")", "50", "%", "$", "5"}));
}

TEST(Tokenizer, GroupsEllipsisAndDashRuns) {
  EXPECT_EQ(tokenize("Wait... what -- now").words, (Words{"Wait", "...", "what", "--", "now"}));
}

TEST(Tokenizer, SplitsEmDashAndGuillemets) {
  EXPECT_EQ(tokenize("«Oui» — non").words, (Words{"«", "Oui", "»", "—", "non"}));
}

TEST(Tokenizer, NormalizesToNfc) {
  const std::string decomposed = "Cafe\xCC\x81";  // e + combining acute
  EXPECT_EQ(tokenize(decomposed).words, (Words{"Caf\xC3\xA9"}));
}

TEST(Tokenizer, IdempotentOnTokenizedOutput) {
  for (const char* s : {"I can't believe it's 3.5% off, isn't it?", "«Oui», dit-il (enfin)."}) {
    const auto once = tokenize(s).words;
    std::string joined;
    for (const auto& w : once) joined += (joined.empty() ? "" : " ") + w;
    EXPECT_EQ(tokenize(joined).words, once) << s;
  }
}

TEST(Detokenizer, Basic) {
  EXPECT_EQ(detokenize(Words{"I", "like", "tea", "."}), "I like tea.");
  EXPECT_EQ(detokenize(Words{}), "");
  EXPECT_EQ(detokenize(Words{"Ja", ",", "gut", "."}), "Ja, gut.");
}

TEST(Detokenizer, QuotesBracketsAndClitics) {
  EXPECT_EQ(detokenize(Words{"He", "said", "\"", "do", "n't", "\"", "(", "twice", ")", "."}),
            "He said \"don't\" (twice).");
}

TEST(Tokenizer, NoWhitespaceOrEmptyWords) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> pieces{"a", "b", " ", "  ", ".", ",", "'", "-", "\t", "(", ")", "\"", "7", "é", "n't"};
  for (int i = 0; i < 2000; ++i) {
    std::string s = "x";
    for (int j = 0, n = 1 + static_cast<int>(rng() % 12); j < n; ++j) s += pieces[rng() % pieces.size()];
    for (const auto& w : tokenize(s).words) {
      ASSERT_FALSE(w.empty()) << s;
      ASSERT_EQ(w.find_first_of(" \t\n\r"), std::string::npos) << s;
    }
  }
}

// Builds sentences the way people write them: punctuation attached to the
// neighbouring word, quotes and brackets balanced.
std::string fuzzSentence(std::mt19937_64& rng) {
  const std::vector<std::string> words{"the", "Dog", "we're", "isn't", "well-known", "3.5", "1,000", "l'eau",
                                       "Straße", "über", "café", "chai", "and/or", "it's", "I'm", "x"};
  const std::vector<std::string> closers{".", ",", "!", "?", ";", ":", "..."};
  std::string s;
  const int n = 1 + static_cast<int>(rng() % 10);
  for (int i = 0; i < n; ++i) {
    if (!s.empty()) s += ' ';
    const auto w = words[rng() % words.size()];
    switch (rng() % 6) {
      case 0:
        s += "(" + w + ")";
        break;
      case 1:
        s += "\"" + w + "\"";
        break;
      case 2:
        s += w + closers[rng() % closers.size()];
        break;
      default:
        s += w;
    }
  }
  return s;
}

TEST(Tokenizer, FuzzRoundTrip) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 3000; ++i) {
    const auto s = fuzzSentence(rng);
    const auto words = tokenize(s).words;
    ASSERT_EQ(detokenize(words), simt::normalizeWhitespace(s)) << s;
    ASSERT_EQ(tokenize(s).words, words) << "non-deterministic on " << s;
  }
}

TEST(Tokenizer, ContractionSampleMatchesReference) {
  const auto expected =
      nlohmann::json::parse(simt::testkit::readFile(simt::testkit::fixture("tokenizer/contractions.expected.json")));
  ASSERT_EQ(expected.size(), 50u);
  std::size_t agree = 0;
  for (const auto& record : expected) {
    auto reference = record.at("words").get<Words>();
    // The reference writes straight double quotes as `` and ''.
    for (auto& w : reference) {
      if (w == "``" || w == "''") w = "\"";
    }
    const auto sentence = record.at("sentence").get<std::string>();
    const auto ours = tokenize(sentence).words;
    if (ours == reference) {
      ++agree;
    } else {
      ADD_FAILURE() << "diverges on: " << sentence;
    }
  }
  EXPECT_EQ(agree, expected.size());
}
