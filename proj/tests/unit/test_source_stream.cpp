#include <gtest/gtest.h>

#include "simt/error.hpp"
#include "simt/source_stream.hpp"
#include "synthetic.hpp"
#include "test_support.hpp"

using namespace simt;

namespace {

std::vector<StreamWord> drain(WordSource& source) {
  std::vector<StreamWord> out;
  while (auto w = source.next()) out.push_back(*w);
  return out;
}

}  // namespace

TEST(TextStream, StampsArePositions) {
  TextStream s(std::vector<std::string>{"a", "b", "c"});
  EXPECT_EQ(s.extent(), 3);
  EXPECT_EQ(drain(s), (std::vector<StreamWord>{{"a", 1}, {"b", 2}, {"c", 3}}));
  EXPECT_FALSE(s.next());
}

TEST(AsrSim, WithholdsLastVisibleWordUntilAudioEnds) {
  TimedTranscript t{{{"I", 300}, {"like", 650}, {"tea", 900}}, 1000, ""};
  AsrSimStream s(t, {200, true});
  EXPECT_EQ(drain(s), (std::vector<StreamWord>{{"I", 800}, {"like", 1000}, {"tea", 1000}}));
}

TEST(AsrSim, WithoutDroppingExposesAtFirstTick) {
  TimedTranscript t{{{"I", 300}, {"like", 650}, {"tea", 900}}, 1000, ""};
  AsrSimStream s(t, {200, false});
  EXPECT_EQ(drain(s), (std::vector<StreamWord>{{"I", 400}, {"like", 800}, {"tea", 1000}}));
}

TEST(AsrSim, FinalTickIsWindowMultiple) {
  TimedTranscript t{{{"a", 10}}, 250, ""};
  AsrSimStream s(t, {200, true});
  EXPECT_EQ(drain(s), (std::vector<StreamWord>{{"a", 400}}));
}

TEST(AsrSim, FuzzedTranscripts) {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 2000; ++n) {
    const auto t = testkit::fuzzedTranscript(rng);
    AsrSimStream s(t, {200, true});
    const auto words = drain(s);
    ASSERT_EQ(words.size(), t.words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      ASSERT_EQ(words[i].word, t.words[i].word);
      ASSERT_GE(words[i].stamp, t.words[i].endMs);
      ASSERT_EQ(words[i].stamp % 200, 0);
      if (i > 0) ASSERT_GE(words[i].stamp, words[i - 1].stamp);
    }
  }
}

TEST(Transcript, JsonRoundTripAndValidation) {
  TimedTranscript t{{{"a", 100}, {"b", 250}}, 300, "x y"};
  const auto j = toJson(t);
  EXPECT_EQ(j.at("words").at(0).at("w"), "a");
  EXPECT_EQ(j.at("words").at(1).at("end_ms"), 250);
  const auto back = transcriptFromJson(j);
  EXPECT_EQ(back.words, t.words);
  EXPECT_EQ(back.totalMs, 300);
  EXPECT_EQ(back.reference, "x y");

  auto unordered = j;
  unordered["words"][1]["end_ms"] = 50;
  EXPECT_THROW(transcriptFromJson(unordered), ParseError);
  auto shortTotal = j;
  shortTotal["total_ms"] = 200;
  EXPECT_THROW(transcriptFromJson(shortTotal), ParseError);
  EXPECT_THROW(AsrSimStream(t, {0, true}), RangeError);

  testkit::TempDir dir("transcript");
  testkit::writeFile(dir / "t.json", j.dump());
  EXPECT_EQ(loadTranscript(dir / "t.json").words, t.words);
}

TEST(StreamMode, Names) {
  EXPECT_EQ(toString(StreamMode::Speech), "speech");
  EXPECT_EQ(streamModeFromString("text"), StreamMode::Text);
  EXPECT_THROW(streamModeFromString("audio"), ParseError);
}
