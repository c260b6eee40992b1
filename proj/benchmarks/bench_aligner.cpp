#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "simt/aligner.hpp"
#include "simt/causal.hpp"

namespace {

std::vector<simt::SentencePair> cipherCorpus(std::size_t pairs, std::size_t vocab) {
  std::mt19937_64 rng(11);
  std::vector<simt::SentencePair> corpus;
  for (std::size_t p = 0; p < pairs; ++p) {
    simt::SentencePair pair;
    const std::size_t len = 3 + rng() % 10;
    for (std::size_t i = 0; i < len; ++i) {
      const auto id = std::to_string(rng() % vocab);
      pair.source.words.push_back("s" + id);
      pair.target.words.push_back("t" + id);
    }
    corpus.push_back(std::move(pair));
  }
  return corpus;
}

void BM_TrainTable(benchmark::State& state) {
  const auto corpus = cipherCorpus(static_cast<std::size_t>(state.range(0)), 300);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simt::trainTable(corpus, 5, simt::Direction::Forward));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainTable)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_CausalAlign(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  simt::TokenizedSentence src;
  simt::TokenizedSentence tgt;
  std::vector<simt::Link> links;
  for (std::size_t i = 0; i < n; ++i) {
    src.words.push_back("s" + std::to_string(i));
    tgt.words.push_back("t" + std::to_string(i));
    links.push_back({n - 1 - i, i});
  }
  const auto set = simt::makeLinkSet(links, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(simt::causalAlign(src, tgt, set));
}
BENCHMARK(BM_CausalAlign)->Arg(20)->Arg(200);

}  // namespace
