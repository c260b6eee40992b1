#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "simt/bleu.hpp"
#include "simt/error.hpp"
#include "simt/metrics.hpp"
#include "test_support.hpp"

using namespace simt;

namespace {

DelaySequence seq(std::vector<double> g, double sourceLen, std::size_t refLen = 0) {
  return {std::move(g), sourceLen, refLen};
}

std::vector<std::string> lines(const std::filesystem::path& path) {
  std::vector<std::string> out;
  std::istringstream in(testkit::readFile(path));
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

SessionTrace traceWithWaits(const std::vector<std::string>& source, const std::vector<std::size_t>& waitsAfter) {
  SessionTrace t;
  t.sourceWords = source;
  for (std::size_t revealed : waitsAfter) {
    SessionEvent e;
    e.type = EventType::Wait;
    e.revealed = revealed;
    t.events.push_back(e);
  }
  return t;
}

}  // namespace

TEST(AverageProportion, Examples) {
  EXPECT_NEAR(averageProportion(seq({1, 2, 3}, 3)), 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(averageProportion(seq({3, 3, 3}, 3)), 1.0);
  EXPECT_DOUBLE_EQ(averageProportion(seq({1}, 1)), 1.0);
  EXPECT_THROW(averageProportion(seq({}, 3)), DegenerateInput);
  EXPECT_THROW(averageProportion(seq({1}, 0)), DegenerateInput);
}

TEST(AverageLagging, Examples) {
  EXPECT_NEAR(averageLagging(seq({1, 2, 3}, 3)), 1.0, 1e-12);
  EXPECT_NEAR(averageLagging(seq({2, 3, 3}, 3)), 2.0, 1e-12);
  EXPECT_NEAR(averageLagging(seq({3, 3, 3}, 3)), 3.0, 1e-12);
  EXPECT_THROW(averageLagging(seq({}, 3)), DegenerateInput);
}

TEST(AverageLagging, TruncatedSessionUsesWholeHypothesis) {
  const auto d = seq({1, 2}, 4);
  EXPECT_FALSE(reachesSourceEnd(d));
  EXPECT_EQ(cutoffStep(d), 2u);
  // gamma = 0.5: (1 + (2 - 2)) / 2
  EXPECT_NEAR(averageLagging(d), 0.5, 1e-12);
}

TEST(LengthAdaptiveAL, Examples) {
  EXPECT_NEAR(lengthAdaptiveAverageLagging(seq({1, 2, 3}, 3, 6)), 1.5, 1e-12);
  EXPECT_NEAR(lengthAdaptiveAverageLagging(seq({2, 3, 3}, 3, 3)), averageLagging(seq({2, 3, 3}, 3)), 1e-12);
  EXPECT_THROW(lengthAdaptiveAverageLagging(seq({1, 2, 3}, 3, 0)), DegenerateInput);
}

TEST(DifferentiableAL, Examples) {
  EXPECT_NEAR(differentiableAverageLagging(seq({1, 2, 3}, 3)), 1.0, 1e-12);
  EXPECT_NEAR(differentiableAverageLagging(seq({3, 3, 3}, 3)), 3.0, 1e-12);
  EXPECT_NEAR(differentiableAverageLagging(seq({1}, 1)), 1.0, 1e-12);
}

TEST(LatencyProperties, IdealWaitKHasAlEqualK) {
  for (std::size_t k = 1; k <= 5; ++k) {
    for (std::size_t n = k; n <= 20; ++n) {
      std::vector<double> g;
      for (std::size_t t = 1; t <= n; ++t) g.push_back(static_cast<double>(std::min(t - 1 + k, n)));
      ASSERT_NEAR(averageLagging(seq(g, static_cast<double>(n))), static_cast<double>(k), 1e-9);
    }
  }
}

TEST(LatencyProperties, FuzzedMonotoneDelays) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t x = 1 + rng() % 30;
    const std::size_t y = 1 + rng() % 30;
    std::vector<double> g;
    double current = 1;
    for (std::size_t t = 0; t < y; ++t) {
      current = std::min<double>(static_cast<double>(x), current + static_cast<double>(rng() % 3));
      g.push_back(current);
    }
    const std::size_t ref = 1 + rng() % 30;
    const auto d = seq(g, static_cast<double>(x), ref);
    const double al = averageLagging(d);
    ASSERT_GE(differentiableAverageLagging(d), al - 1e-9);
    ASSERT_GE(lengthAdaptiveAverageLagging(d), al - 1e-9);
    const double ap = averageProportion(d);
    ASSERT_GT(ap, 0.0);
    ASSERT_LE(ap, 1.0 + 1e-12);
    const bool full = std::all_of(g.begin(), g.end(), [&](double v) { return v == static_cast<double>(x); });
    ASSERT_EQ(std::abs(ap - 1.0) < 1e-12, full);
  }
}

TEST(LatencyProperties, MillisecondModeMatchesWordModeWhenRescaled) {
  const auto words = seq({2, 3, 5, 6, 8, 9}, 9, 6);
  auto ms = words;
  for (auto& v : ms.g) v *= 350.0;
  ms.sourceLen *= 350.0;
  EXPECT_NEAR(averageLagging(ms), 350.0 * averageLagging(words), 1e-9);
  EXPECT_NEAR(lengthAdaptiveAverageLagging(ms), 350.0 * lengthAdaptiveAverageLagging(words), 1e-9);
  EXPECT_NEAR(differentiableAverageLagging(ms), 350.0 * differentiableAverageLagging(words), 1e-9);
  EXPECT_NEAR(averageProportion(ms), averageProportion(words), 1e-12);
}

TEST(RealTimeFactor, Examples) {
  EXPECT_DOUBLE_EQ(realTimeFactor(15000, 10000), 1.5);
  EXPECT_DOUBLE_EQ(realTimeFactor(10000, 10000), 1.0);
  EXPECT_DOUBLE_EQ(realTimeFactor(700, 1000), 0.7);
  EXPECT_THROW(realTimeFactor(1, 0), DegenerateInput);
}

TEST(Bleu, IdentityAndDisjoint) {
  const std::vector<std::string> refs{"the cat sat on the mat .", "a quick brown fox jumps over it"};
  EXPECT_NEAR(corpusBleu(refs, refs).score, 100.0, 1e-9);
  const std::vector<std::string> other{"zz yy xx ww vv uu", "qq pp oo nn mm ll"};
  EXPECT_DOUBLE_EQ(corpusBleu(other, refs).score, 0.0);
  EXPECT_THROW(corpusBleu(refs, std::vector<std::string>{"x"}), InputMismatch);
  EXPECT_THROW(corpusBleu(std::vector<std::string>{}, std::vector<std::string>{}), InputMismatch);
}

TEST(Bleu, Tokenize13aMatchesReference) {
  EXPECT_EQ(tokenize13a("He said: \"It's a well-known fact.\""), "He said : \" It's a well-known fact . \"");
  EXPECT_EQ(tokenize13a("3.5% in 2023."), "3.5 % in 2023 .");
  EXPECT_EQ(tokenize13a("a.. b"), "a . . b");
  EXPECT_EQ(tokenize13a("Москва — столица."), "Москва — столица .");
  EXPECT_EQ(tokenize13a("x, y 1,000 1-2 -3"), "x , y 1,000 1 - 2 -3");
}

TEST(Bleu, FixturesMatchReferenceScorer) {
  const auto golden = nlohmann::json::parse(testkit::readFile(testkit::fixture("bleu/golden.json")));
  for (const char* name : {"a", "b", "c"}) {
    const auto hyps = lines(testkit::fixture(std::string("bleu/") + name + ".hyp"));
    const auto refs = lines(testkit::fixture(std::string("bleu/") + name + ".ref"));
    EXPECT_NEAR(corpusBleu(hyps, refs).score, golden.at(name).get<double>(), 0.01) << name;
  }
}

TEST(Bleu, CorpusOrderDoesNotMatter) {
  auto hyps = lines(testkit::fixture("bleu/b.hyp"));
  auto refs = lines(testkit::fixture("bleu/b.ref"));
  const double base = corpusBleu(hyps, refs).score;
  std::vector<std::size_t> order(hyps.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(1);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::string> h;
  std::vector<std::string> r;
  for (auto i : order) {
    h.push_back(hyps[i]);
    r.push_back(refs[i]);
  }
  EXPECT_NEAR(corpusBleu(h, r).score, base, 1e-9);
}

TEST(WaitHistogram, CountsPrecedingWords) {
  const std::vector<SessionTrace> traces{traceWithWaits({"the", "cat", "of", "the"}, {1, 4, 3})};
  const auto h = waitHistogram(traces, {"the", "of"});
  EXPECT_EQ(h.counts, (std::map<std::string, std::size_t>{{"the", 2}, {"of", 1}}));
  EXPECT_DOUBLE_EQ(h.functionShare(), 1.0);
  const auto empty = waitHistogram(std::vector<SessionTrace>{traceWithWaits({"a"}, {})}, {"the"});
  EXPECT_TRUE(empty.counts.empty());
  EXPECT_EQ(empty.functionShare(), 0.0);
}

TEST(WaitHistogram, FuzzedFunctionShare) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> vocab{"The", "of", "and", "cat", "runs", "in", "blue", "sky"};
  const std::set<std::string> function{"the", "of", "and", "in"};
  std::vector<SessionTrace> traces;
  std::size_t functionCount = 0;
  std::size_t total = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<std::string> source;
    for (std::size_t i = 0, n = 1 + rng() % 10; i < n; ++i) source.push_back(vocab[rng() % vocab.size()]);
    std::vector<std::size_t> waits;
    for (std::size_t i = 0, n = rng() % 5; i < n; ++i) {
      const std::size_t revealed = 1 + rng() % source.size();
      waits.push_back(revealed);
      auto lower = source[revealed - 1];
      std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
      functionCount += function.contains(lower);
      ++total;
    }
    traces.push_back(traceWithWaits(source, waits));
  }
  const auto h = waitHistogram(traces, function);
  EXPECT_EQ(h.total, total);
  EXPECT_EQ(h.functionWaits, functionCount);
}

TEST(TradeoffCurve, SortedStableCsv) {
  LatencyReport r1;
  r1.bleu = 10;
  r1.al = 1;
  r1.sessionCount = 2;
  LatencyReport r3 = r1;
  r3.bleu = 30;
  LatencyReport r5 = r1;
  r5.bleu = 50;
  const auto csv = tradeoffCurve({{5, r5}, {1, r1}, {3, r3}, {3, r1}});
  std::istringstream in(csv);
  std::vector<std::string> rows;
  for (std::string line; std::getline(in, line);) rows.push_back(line);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "k,bleu,al,laal,ap,dal,rtf,unit,sessions");
  EXPECT_TRUE(rows[1].starts_with("1,10.000000"));
  EXPECT_TRUE(rows[2].starts_with("3,30.000000"));
  EXPECT_TRUE(rows[3].starts_with("3,10.000000"));
  EXPECT_TRUE(rows[4].starts_with("5,50.000000"));
  EXPECT_THROW(tradeoffCurve({}), InputMismatch);
}

TEST(Evaluate, IdentityAndBootstrap) {
  std::vector<EvaluationItem> items;
  for (int i = 0; i < 102; ++i) {
    EvaluationItem item;
    item.hypothesis = "sentence number " + std::to_string(i) + " is here .";
    item.reference = item.hypothesis;
    item.delays = seq({6, 6, 6, 6, 6, 6}, 6, 6);
    items.push_back(item);
  }
  const auto report = evaluate(items, LatencyUnit::Words);
  EXPECT_NEAR(report.bleu, 100.0, 1e-9);
  EXPECT_DOUBLE_EQ(report.ap, 1.0);
  EXPECT_EQ(report.sessionCount, 102u);
  EXPECT_FALSE(report.rtf.has_value());

  const auto boot = bootstrap(items, LatencyUnit::Words, 10, 4);
  EXPECT_EQ(boot.resamples, 10u);
  for (const char* m : {"bleu", "al", "laal", "ap", "dal"}) {
    ASSERT_TRUE(boot.metrics.contains(m)) << m;
    EXPECT_GE(boot.metrics.at(m).stddev, 0.0);
  }
  EXPECT_NEAR(boot.metrics.at("ap").mean, 1.0, 1e-12);
  const auto again = bootstrap(items, LatencyUnit::Words, 10, 4);
  EXPECT_EQ(toJson(boot).dump(), toJson(again).dump());
  const auto j = toJson(boot);
  EXPECT_TRUE(j.at("metrics").at("bleu").contains("mean"));
  EXPECT_TRUE(j.at("metrics").at("bleu").contains("std"));
}

TEST(Evaluate, OrderIndependent) {
  std::vector<EvaluationItem> items;
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    EvaluationItem item;
    item.hypothesis = "w" + std::to_string(rng() % 5) + " w" + std::to_string(rng() % 5);
    item.reference = "w1 w2 w3";
    item.delays = seq({1 + static_cast<double>(rng() % 2), 3}, 3, 3);
    items.push_back(item);
  }
  const auto a = evaluate(items, LatencyUnit::Words);
  std::reverse(items.begin(), items.end());
  const auto b = evaluate(items, LatencyUnit::Words);
  EXPECT_NEAR(a.bleu, b.bleu, 1e-9);
  EXPECT_NEAR(a.al, b.al, 1e-9);
  EXPECT_NEAR(a.dal, b.dal, 1e-9);
}

TEST(Evaluate, RtfWhenTimed) {
  EvaluationItem item;
  item.hypothesis = item.reference = "a b c";
  item.delays = seq({1000, 2000, 2000}, 2000, 3);
  item.processingMs = 1400;
  item.audioMs = 2000;
  const auto report = evaluate(std::vector<EvaluationItem>{item}, LatencyUnit::Milliseconds);
  ASSERT_TRUE(report.rtf.has_value());
  EXPECT_DOUBLE_EQ(*report.rtf, 0.7);
  EXPECT_EQ(toJson(report).at("unit"), "ms");
}
